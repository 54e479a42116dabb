#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "panoclust/cloud.hpp"

namespace panoclust {

/// Uniform hash grid over a fixed point set. Radius queries touch
/// (2*ceil(r/cell)+1)^3 cells; k-NN expands rings of cells until the k-th
/// candidate is provably closer than any unvisited cell.
class SpatialGrid {
 public:
  SpatialGrid(std::span<const Vec3> points, double cell_size);

  double cell_size() const { return cell_; }
  std::size_t size() const { return points_.size(); }

  /// Calls f(index, squared_distance) for every point with distance < radius.
  template <typename F>
  void for_each_within(const Vec3& query, double radius, F&& f) const {
    const auto center = cell_of(query);
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
    const double r2 = radius * radius;
    for (std::int64_t di = -reach; di <= reach; ++di) {
      for (std::int64_t dj = -reach; dj <= reach; ++dj) {
        for (std::int64_t dk = -reach; dk <= reach; ++dk) {
          const auto it = cells_.find(pack(center[0] + di, center[1] + dj, center[2] + dk));
          if (it == cells_.end()) continue;
          for (auto s = it->second.first; s < it->second.second; ++s) {
            const auto idx = order_[s];
            const double d2 = (points_[idx] - query).squared_norm();
            if (d2 < r2) f(idx, d2);
          }
        }
      }
    }
  }

  /// Indices of the k nearest points (including a coincident query point),
  /// sorted by distance then index.
  std::vector<std::size_t> nearest(const Vec3& query, std::size_t k) const;

 private:
  std::array<std::int64_t, 3> cell_of(const Vec3& p) const;
  static std::uint64_t pack(std::int64_t i, std::int64_t j, std::int64_t k);

  std::vector<Vec3> points_;
  double cell_;
  Vec3 anchor_;
  std::array<std::int64_t, 3> max_cell_{};
  std::vector<std::size_t> order_;
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> cells_;
};

std::vector<Vec3> positions(const PointCloud& cloud);

}  // namespace panoclust
