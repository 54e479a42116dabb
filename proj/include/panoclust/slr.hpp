#pragma once

#include <optional>
#include <span>
#include <vector>

#include "panoclust/projection.hpp"

namespace panoclust {

struct SlrParams {
  double th_run = 0.5;     ///< in-row distance below which consecutive returns share a run (m)
  double th_merge = 1.0;   ///< distance below which a run joins a cluster in the rows above (m)
  int nn_window = 8;       ///< half-width (columns) of the nearest-neighbor search in the row above
  int max_gap = 5;         ///< empty columns a run may bridge
  bool use_range_scalar = false;  ///< compare |r_a - r_b| instead of 3D distance
  bool makeup_search = true;      ///< brute-force two rows above when the one-row search fails

  void validate() const;
};

/// Occupied columns of one scan line that chain together under th_run.
/// Columns are listed in scan order; a run that wraps past the last column
/// continues at column 0.
struct Run {
  int row = 0;
  std::vector<int> columns;
  Label label = 0;
};

/// Union-find over cluster labels. Labels are 1-based; the smaller root
/// always survives a merge.
class LabelStore {
 public:
  Label make();
  Label find(Label label);
  Label merge(Label a, Label b);
  std::size_t size() const { return parent_.size() - 1; }

 private:
  std::vector<Label> parent_{0};
};

std::vector<Run> find_runs(std::span<const std::optional<Point3>> row, const SlrParams& params = {});
std::vector<Run> find_runs(const RangeImage& image, int row, const SlrParams& params = {});

struct SlrStats {
  std::size_t nn_queries = 0;      ///< one-row nearest-neighbor lookups
  std::size_t makeup_queries = 0;  ///< lookups made by the two-row make-up search
  std::size_t makeup_triggers = 0;
  std::size_t runs = 0;
};

/// Scan-line run clustering, top row first. The returned grid holds root
/// labels (the smallest label ever given to any run of the cluster).
LabelGrid slr_cluster(const RangeImage& image, const SlrParams& params = {}, SlrStats* stats = nullptr);

}  // namespace panoclust
