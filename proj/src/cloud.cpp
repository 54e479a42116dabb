#include "panoclust/cloud.hpp"

namespace panoclust {

PointCloud PointCloud::subset(const std::vector<std::size_t>& indices) const {
  PointCloud out;
  out.points.reserve(indices.size());
  for (const auto i : indices) out.points.push_back(points[i]);
  return out;
}

std::vector<CloudViolation> validate_cloud(const PointCloud& cloud) {
  std::vector<CloudViolation> violations;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!cloud[i].finite()) violations.push_back({i, cloud[i]});
  }
  return violations;
}

}  // namespace panoclust
