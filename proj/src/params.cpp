#include "panoclust/params.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "panoclust/errors.hpp"

namespace panoclust {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::euclidean: return "euclidean";
    case Algorithm::supervoxel: return "supervoxel";
    case Algorithm::depth: return "depth";
    case Algorithm::slr: return "slr";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto a : {Algorithm::euclidean, Algorithm::supervoxel, Algorithm::depth, Algorithm::slr}) {
    if (to_string(a) == name) return a;
  }
  throw ParameterError("unknown algorithm '" + std::string(name) + "' (euclidean|supervoxel|depth|slr)");
}

Algorithm algorithm_of(const ClusterParams& params) {
  return static_cast<Algorithm>(params.index());
}

void validate(const ClusterParams& params) {
  std::visit([](const auto& p) { p.validate(); }, params);
}

ClusterParams Settings::cluster_params() const {
  switch (algorithm) {
    case Algorithm::euclidean: return euclidean;
    case Algorithm::supervoxel: return supervoxel;
    case Algorithm::depth: return depth;
    case Algorithm::slr: return slr;
  }
  return slr;
}

void Settings::validate() const {
  projection.validate();
  euclidean.validate();
  supervoxel.validate();
  depth.validate();
  slr.validate();
  if (workers < 1) throw ParameterError("pipeline.workers must be >= 1");
  if (repetitions < 1) throw ParameterError("bench.repetitions must be >= 1");
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("setting '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("setting '" + std::string(key) + "': expected a boolean, got '" + std::string(text) + "'");
}

template <typename T>
std::string show(const T& v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

struct Entry {
  std::string key;
  std::string help;
  std::function<void(Settings&, std::string_view, std::string_view)> set;
  std::function<std::string(const Settings&)> get;
};

#define PANOCLUST_NUMBER(KEY, HELP, TYPE, FIELD)                                                        \
  Entry {                                                                                               \
    KEY, HELP, [](Settings& s, std::string_view k, std::string_view v) { s.FIELD = parse_number<TYPE>(k, v); }, \
        [](const Settings& s) { return show(s.FIELD); }                                                 \
  }
#define PANOCLUST_BOOL(KEY, HELP, FIELD)                                                                      \
  Entry {                                                                                                     \
    KEY, HELP, [](Settings& s, std::string_view k, std::string_view v) { s.FIELD = parse_bool(k, v); },       \
        [](const Settings& s) { return std::string(s.FIELD ? "true" : "false"); }                             \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      Entry{"algorithm", "clustering algorithm: euclidean|supervoxel|depth|slr",
            [](Settings& s, std::string_view k, std::string_view v) {
              try {
                s.algorithm = parse_algorithm(v);
              } catch (const ParameterError& e) {
                throw ConfigError("setting '" + std::string(k) + "': " + e.what());
              }
            },
            [](const Settings& s) { return std::string(to_string(s.algorithm)); }},
      PANOCLUST_NUMBER("rows", "range image rows (beams)", int, projection.rows),
      PANOCLUST_NUMBER("cols", "range image columns (azimuth bins)", int, projection.cols),
      PANOCLUST_NUMBER("fov_up_deg", "upper edge of the vertical field of view (deg)", double, projection.fov_up_deg),
      PANOCLUST_NUMBER("fov_down_deg", "lower edge of the vertical field of view (deg)", double,
                       projection.fov_down_deg),
      PANOCLUST_NUMBER("euclidean.d_th", "radius threshold (m)", double, euclidean.d_th),
      PANOCLUST_NUMBER("euclidean.voxel_edge", "subsampling voxel edge (m)", double, euclidean.voxel_edge),
      PANOCLUST_NUMBER("euclidean.seed", "voxel representative seed", std::uint64_t, euclidean.seed),
      PANOCLUST_NUMBER("supervoxel.w_c", "color weight (no effect on LiDAR)", double, supervoxel.w_c),
      PANOCLUST_NUMBER("supervoxel.w_s", "spatial weight", double, supervoxel.w_s),
      PANOCLUST_NUMBER("supervoxel.w_n", "normal weight", double, supervoxel.w_n),
      PANOCLUST_NUMBER("supervoxel.voxel_resolution", "voxel edge (m)", double, supervoxel.voxel_resolution),
      PANOCLUST_NUMBER("supervoxel.seed_resolution", "seed cell edge R (m)", double, supervoxel.seed_resolution),
      PANOCLUST_NUMBER("supervoxel.refinement_iterations", "re-seeding passes", int,
                       supervoxel.refinement_iterations),
      PANOCLUST_NUMBER("supervoxel.normal_k", "neighbors for normal estimation", int, supervoxel.normal_k),
      PANOCLUST_NUMBER("supervoxel.min_seed_voxels", "occupied voxels a seed cell needs", int,
                       supervoxel.min_seed_voxels),
      PANOCLUST_NUMBER("depth.theta_deg", "beta threshold (deg)", double, depth.theta_deg),
      PANOCLUST_NUMBER("depth.max_skip", "hole pixels searched per direction", int, depth.max_skip),
      PANOCLUST_NUMBER("slr.th_run", "run threshold (m)", double, slr.th_run),
      PANOCLUST_NUMBER("slr.th_merge", "merge threshold (m)", double, slr.th_merge),
      PANOCLUST_NUMBER("slr.nn_window", "nearest-neighbor column half-window", int, slr.nn_window),
      PANOCLUST_NUMBER("slr.max_gap", "empty columns a run may bridge", int, slr.max_gap),
      PANOCLUST_BOOL("slr.use_range_scalar", "compare ranges instead of 3D distance", slr.use_range_scalar),
      PANOCLUST_BOOL("slr.makeup_search", "two-row make-up search", slr.makeup_search),
      PANOCLUST_BOOL("pipeline.per_class", "cluster each thing class separately", per_class),
      PANOCLUST_BOOL("pipeline.majority_vote", "give each cluster its majority class", majority_vote),
      PANOCLUST_NUMBER("pipeline.workers", "frames processed in parallel", int, workers),
      PANOCLUST_NUMBER("bench.repetitions", "timed repetitions per frame", int, repetitions),
      PANOCLUST_NUMBER("eval.min_points", "ground-truth instances below this size are void", std::size_t,
                       min_points),
  };
  return table;
}

#undef PANOCLUST_NUMBER
#undef PANOCLUST_BOOL

const Entry& entry(std::string_view key) {
  for (const auto& e : entries())
    if (e.key == key) return e;
  throw ConfigError("unknown setting '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

std::string setting_help(std::string_view key) { return entry(key).help; }

void apply_setting(Settings& settings, std::string_view key, std::string_view value) {
  entry(key).set(settings, key, trim(value));
}

Settings parse_settings(std::string_view text, Settings base) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto body = trim(raw);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("settings line " + std::to_string(line) + ": expected 'key = value'");
    }
    apply_setting(base, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return base;
}

Settings load_settings(const std::filesystem::path& path, Settings base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open settings file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_settings(text.str(), std::move(base));
}

Settings settings_from_map(const std::map<std::string, std::string>& values, Settings base) {
  for (const auto& [k, v] : values) apply_setting(base, k, v);
  return base;
}

std::vector<std::pair<std::string, std::string>> describe(const Settings& settings) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : entries()) out.emplace_back(e.key, e.get(settings));
  return out;
}

}  // namespace panoclust
