#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "panoclust/cloud.hpp"

namespace panoclust {

struct Normal {
  Vec3 direction{0.0, 0.0, 1.0};  ///< unit length
  bool degenerate = false;        ///< neighborhood rank < 2, direction is the vertical fallback
};

/// PCA normals from the k nearest neighbors (the point itself included).
/// The smallest-eigenvalue eigenvector is oriented toward the sensor origin;
/// when the origin lies in the fitted plane the vertical component is made
/// positive. Requires k >= 3 and a non-empty input.
std::vector<Normal> estimate_normals(std::span<const Vec3> points, std::size_t k, double cell_size = 0.0);
std::vector<Normal> estimate_normals(const PointCloud& cloud, std::size_t k);

}  // namespace panoclust
