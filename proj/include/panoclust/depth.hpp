#pragma once

#include <cstddef>

#include "panoclust/projection.hpp"

namespace panoclust {

struct DepthParams {
  double theta_deg = 10.0;  ///< neighbors are joined when beta > theta
  int max_skip = 5;         ///< holes searched per direction before giving up

  void validate() const;
};

/// Angle at the farther return between its beam and the line to the nearer
/// return, for ranges d1 >= d2 separated by beam angle alpha. Inputs are
/// reordered when d1 < d2.
/// Equal ranges give the largest value, pi/2 - alpha/2.
double beta(double d1, double d2, double alpha);

struct DepthStats {
  std::size_t predicate_evaluations = 0;
  std::size_t components = 0;
};

/// Breadth-first component labeling on the range image. Neighbors are the
/// nearest occupied pixel within max_skip steps up, down, left and right
/// (columns wrap); alpha grows with the number of steps taken.
LabelGrid depth_cluster(const RangeImage& image, const DepthParams& params = {}, DepthStats* stats = nullptr);

}  // namespace panoclust
