#include "panoclust/spatial_grid.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "panoclust/errors.hpp"

namespace panoclust {

namespace {
constexpr std::int64_t kBias = std::int64_t{1} << 20;
constexpr std::uint64_t kMask = (std::uint64_t{1} << 21) - 1;
}  // namespace

std::vector<Vec3> positions(const PointCloud& cloud) {
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points) out.push_back(p.position());
  return out;
}

SpatialGrid::SpatialGrid(std::span<const Vec3> points, double cell_size)
    : points_(points.begin(), points.end()), cell_(cell_size) {
  if (!(cell_size > 0.0)) throw ParameterError("grid cell size must be positive");
  if (points_.empty()) return;
  anchor_ = points_.front();
  for (const auto& p : points_) {
    anchor_.x = std::min(anchor_.x, p.x);
    anchor_.y = std::min(anchor_.y, p.y);
    anchor_.z = std::min(anchor_.z, p.z);
  }

  std::vector<std::uint64_t> keys(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto c = cell_of(points_[i]);
    for (int a = 0; a < 3; ++a) max_cell_[a] = std::max(max_cell_[a], c[a]);
    if (std::max({c[0], c[1], c[2]}) >= kBias) throw ParameterError("point extent too large for grid cell size");
    keys[i] = pack(c[0], c[1], c[2]);
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  cells_.reserve(points_.size());
  for (std::size_t s = 0; s < order_.size();) {
    std::size_t e = s;
    while (e < order_.size() && keys[order_[e]] == keys[order_[s]]) ++e;
    cells_.emplace(keys[order_[s]], std::make_pair(s, e));
    s = e;
  }
}

std::array<std::int64_t, 3> SpatialGrid::cell_of(const Vec3& p) const {
  return {static_cast<std::int64_t>(std::floor((p.x - anchor_.x) / cell_)),
          static_cast<std::int64_t>(std::floor((p.y - anchor_.y) / cell_)),
          static_cast<std::int64_t>(std::floor((p.z - anchor_.z) / cell_))};
}

std::uint64_t SpatialGrid::pack(std::int64_t i, std::int64_t j, std::int64_t k) {
  const auto u = [](std::int64_t v) { return static_cast<std::uint64_t>(v + kBias) & kMask; };
  return (u(i) << 42) | (u(j) << 21) | u(k);
}

std::vector<std::size_t> SpatialGrid::nearest(const Vec3& query, std::size_t k) const {
  k = std::min(k, points_.size());
  if (k == 0) return {};

  const auto c = cell_of(query);
  // Rings beyond this bound cannot contain points.
  std::int64_t max_ring = 0;
  for (int a = 0; a < 3; ++a) {
    max_ring = std::max({max_ring, std::abs(c[a]), std::abs(max_cell_[a] - c[a])});
  }

  std::vector<std::pair<double, std::size_t>> found;
  const auto visit = [&](std::int64_t i, std::int64_t j, std::int64_t l) {
    const auto it = cells_.find(pack(i, j, l));
    if (it == cells_.end()) return;
    for (auto s = it->second.first; s < it->second.second; ++s) {
      const auto idx = order_[s];
      found.emplace_back((points_[idx] - query).squared_norm(), idx);
    }
  };

  for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
    for (std::int64_t di = -ring; di <= ring; ++di) {
      for (std::int64_t dj = -ring; dj <= ring; ++dj) {
        const bool face = std::abs(di) == ring || std::abs(dj) == ring;
        if (face) {
          for (std::int64_t dk = -ring; dk <= ring; ++dk) visit(c[0] + di, c[1] + dj, c[2] + dk);
        } else {
          visit(c[0] + di, c[1] + dj, c[2] - ring);
          if (ring > 0) visit(c[0] + di, c[1] + dj, c[2] + ring);
        }
      }
    }
    if (found.size() >= k) {
      std::nth_element(found.begin(), found.begin() + static_cast<std::ptrdiff_t>(k - 1), found.end());
      // Unvisited points are at least ring*cell away from the query.
      const double bound = double(ring) * cell_;
      if (found[k - 1].first <= bound * bound) break;
    }
  }
  std::sort(found.begin(), found.end());
  found.resize(k);
  std::vector<std::size_t> out;
  out.reserve(k);
  for (const auto& [d2, idx] : found) out.push_back(idx);
  return out;
}

}  // namespace panoclust
