#pragma once

#include <cstddef>
#include <vector>

#include "panoclust/normals.hpp"
#include "panoclust/voxel.hpp"

namespace panoclust {

struct SupervoxelParams {
  double w_c = 0.0;  ///< color weight; LiDAR has no color so it never contributes
  double w_s = 1.0;
  double w_n = 0.0;
  double voxel_resolution = 0.5;
  double seed_resolution = 8.0;  ///< R
  int refinement_iterations = 2;
  int normal_k = 10;
  int min_seed_voxels = 3;  ///< seed cells with fewer occupied voxels are not seeded

  void validate() const;
};

/// Position plus unit normal, for voxels and cluster centroids alike.
struct Surfel {
  Vec3 position;
  Vec3 normal{0.0, 0.0, 1.0};
};

/// D = sqrt(w_c*Dc^2 + w_s*Ds^2 / (3 R^2) + w_n*Dn^2) with Dc = 0 and
/// Dn = 1 - |n_p . n_c|.
double sv_distance(const Surfel& p, const Surfel& centroid, const SupervoxelParams& params);

/// Voxel-level result, exposed for inspection.
struct SupervoxelSegmentation {
  VoxelPartition voxels;
  std::vector<Surfel> voxel_surfels;
  /// Initial seed voxel per seeded cluster (before refinement).
  std::vector<std::size_t> seeds;
  /// Final centroid per label (index label - 1).
  std::vector<Surfel> centroids;
  /// Label 1.. per voxel.
  std::vector<Label> voxel_labels;
  /// Number of clusters created for voxels no seed could reach.
  std::size_t orphan_clusters = 0;
};

SupervoxelSegmentation supervoxel_segment(const PointCloud& cloud, const SupervoxelParams& params = {});

/// Every point gets its voxel's supervoxel label; labels start at 1.
InstanceLabeling supervoxel_cluster(const PointCloud& cloud, const SupervoxelParams& params = {});

/// 26-neighborhood offsets.
const std::vector<VoxelKey>& voxel_neighbor_offsets();

}  // namespace panoclust
