#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "panoclust/depth.hpp"
#include "panoclust/euclidean.hpp"
#include "panoclust/projection.hpp"
#include "panoclust/slr.hpp"
#include "panoclust/supervoxel.hpp"

namespace panoclust {

enum class Algorithm { euclidean, supervoxel, depth, slr };

std::string_view to_string(Algorithm algorithm);
/// Throws ParameterError naming the unknown value.
Algorithm parse_algorithm(std::string_view name);

/// The selected algorithm together with its parameters.
using ClusterParams = std::variant<EuclideanParams, SupervoxelParams, DepthParams, SlrParams>;

Algorithm algorithm_of(const ClusterParams& params);
void validate(const ClusterParams& params);

/// Everything a run can be configured with. Each field has a dotted key;
/// files, CLI flags and string maps all go through apply_setting, so
/// defaults live in exactly one place.
struct Settings {
  Algorithm algorithm = Algorithm::slr;
  ProjectionConfig projection;
  EuclideanParams euclidean;
  SupervoxelParams supervoxel;
  DepthParams depth;
  SlrParams slr;

  bool per_class = true;
  bool majority_vote = false;
  int workers = 1;
  int repetitions = 1;
  std::size_t min_points = 50;

  ClusterParams cluster_params() const;
  void validate() const;
};

/// Known keys in declaration order.
const std::vector<std::string>& setting_keys();
std::string setting_help(std::string_view key);

/// Throws ConfigError carrying the key for unknown keys or malformed values.
void apply_setting(Settings& settings, std::string_view key, std::string_view value);

/// "key = value" lines; '#' starts a comment.
Settings parse_settings(std::string_view text, Settings base = {});
Settings load_settings(const std::filesystem::path& path, Settings base = {});
Settings settings_from_map(const std::map<std::string, std::string>& values, Settings base = {});

/// Every key with its current value, for reproducibility headers.
std::vector<std::pair<std::string, std::string>> describe(const Settings& settings);

}  // namespace panoclust
