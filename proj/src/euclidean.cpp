#include "panoclust/euclidean.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "panoclust/errors.hpp"
#include "panoclust/spatial_grid.hpp"
#include "panoclust/voxel.hpp"

namespace panoclust {

void EuclideanParams::validate() const {
  if (!(d_th > 0.0) || !std::isfinite(d_th)) throw ParameterError("euclidean.d_th must be > 0");
  if (!(voxel_edge > 0.0) || !std::isfinite(voxel_edge)) throw ParameterError("euclidean.voxel_edge must be > 0");
}

InstanceLabeling radius_components(std::span<const Vec3> points, double d_th) {
  if (!(d_th > 0.0)) throw ParameterError("radius threshold must be > 0");
  InstanceLabeling labels(points.size(), 0);
  if (points.empty()) return labels;

  const SpatialGrid grid(points, d_th);
  Label next = 1;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < points.size(); ++seed) {
    if (labels[seed] != 0) continue;
    const Label label = next++;
    labels[seed] = label;
    queue.push_back(seed);
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      grid.for_each_within(points[cur], d_th, [&](std::size_t nb, double) {
        if (labels[nb] == 0) {
          labels[nb] = label;
          queue.push_back(nb);
        }
      });
    }
  }
  return labels;
}

InstanceLabeling euclidean_cluster(const PointCloud& cloud, const EuclideanParams& params) {
  params.validate();
  if (cloud.empty()) return {};
  const auto sample = voxel_downsample(cloud, params.voxel_edge, params.seed);
  const auto pts = positions(sample.sample);
  return propagate_labels(radius_components(pts, params.d_th), sample.members_of);
}

}  // namespace panoclust
