#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "panoclust/cloud.hpp"

namespace panoclust {

using VoxelKey = std::array<std::int64_t, 3>;

/// Axis-aligned voxel partition of a cloud. The grid is anchored at the
/// cloud's bounding-box minimum: key = floor((p - min) / edge).
struct VoxelPartition {
  Vec3 anchor;
  double edge = 0.0;
  /// Voxels in order of their lowest member index; members ascending.
  std::vector<std::vector<std::size_t>> members;
  std::vector<VoxelKey> keys;
  /// Original point index -> voxel index.
  std::vector<std::size_t> voxel_of;
};

VoxelPartition partition_voxels(const PointCloud& cloud, double edge);

struct VoxelSample {
  PointCloud sample;
  /// Sample index -> original index of the chosen representative.
  std::vector<std::size_t> representative_of;
  /// Sample (voxel) index -> original indices falling in that voxel.
  std::vector<std::vector<std::size_t>> members_of;
};

/// One seeded pseudo-random representative per occupied voxel. The choice
/// depends only on (seed, voxel key, member list), so it is reproducible.
VoxelSample voxel_downsample(const PointCloud& cloud, double edge, std::uint64_t seed = 0);

/// Every original point receives its voxel representative's label.
InstanceLabeling propagate_labels(const InstanceLabeling& sample_labels,
                                  const std::vector<std::vector<std::size_t>>& members_of);

}  // namespace panoclust
