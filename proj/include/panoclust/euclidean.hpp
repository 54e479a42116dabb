#pragma once

#include <cstdint>
#include <span>

#include "panoclust/cloud.hpp"

namespace panoclust {

struct EuclideanParams {
  double d_th = 0.5;         ///< radius threshold (m), strict: pairs with distance < d_th are linked
  double voxel_edge = 0.10;  ///< subsampling voxel side (m)
  std::uint64_t seed = 0;    ///< voxel representative choice

  void validate() const;
};

/// Connected components of the radius graph (edges for distance < d_th),
/// labels 1.. in order of lowest member index.
InstanceLabeling radius_components(std::span<const Vec3> points, double d_th);

/// Voxel-subsample, cluster the representatives, propagate to all points.
InstanceLabeling euclidean_cluster(const PointCloud& cloud, const EuclideanParams& params = {});

}  // namespace panoclust
