#include "panoclust/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "panoclust/errors.hpp"

namespace panoclust {
namespace {

struct KeyHash {
  std::size_t operator()(const VoxelKey& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto v : k) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

VoxelPartition partition_voxels(const PointCloud& cloud, double edge) {
  if (!(edge > 0.0) || !std::isfinite(edge)) {
    throw ParameterError("voxel edge must be positive, got " + std::to_string(edge));
  }
  VoxelPartition part;
  part.edge = edge;
  part.voxel_of.resize(cloud.size());
  if (cloud.empty()) return part;

  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud[i];
    if (!p.finite()) throw ParameterError("non-finite point at index " + std::to_string(i));
    lo.x = std::min(lo.x, double(p.x));
    lo.y = std::min(lo.y, double(p.y));
    lo.z = std::min(lo.z, double(p.z));
  }
  part.anchor = lo;

  std::unordered_map<VoxelKey, std::size_t, KeyHash> index_of;
  index_of.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i].position() - lo;
    const VoxelKey key{static_cast<std::int64_t>(std::floor(p.x / edge)),
                       static_cast<std::int64_t>(std::floor(p.y / edge)),
                       static_cast<std::int64_t>(std::floor(p.z / edge))};
    auto [it, inserted] = index_of.try_emplace(key, part.members.size());
    if (inserted) {
      part.members.emplace_back();
      part.keys.push_back(key);
    }
    part.members[it->second].push_back(i);
    part.voxel_of[i] = it->second;
  }
  return part;
}

VoxelSample voxel_downsample(const PointCloud& cloud, double edge, std::uint64_t seed) {
  auto part = partition_voxels(cloud, edge);
  VoxelSample out;
  out.sample.points.reserve(part.members.size());
  out.representative_of.reserve(part.members.size());
  for (std::size_t v = 0; v < part.members.size(); ++v) {
    const auto& members = part.members[v];
    const auto h = splitmix64(seed ^ KeyHash{}(part.keys[v]));
    const auto chosen = members[h % members.size()];
    out.sample.points.push_back(cloud[chosen]);
    out.representative_of.push_back(chosen);
  }
  out.members_of = std::move(part.members);
  return out;
}

InstanceLabeling propagate_labels(const InstanceLabeling& sample_labels,
                                  const std::vector<std::vector<std::size_t>>& members_of) {
  if (sample_labels.size() != members_of.size()) {
    throw ParameterError("propagate_labels: " + std::to_string(sample_labels.size()) +
                         " sample labels for " + std::to_string(members_of.size()) + " voxels");
  }
  std::size_t total = 0;
  for (const auto& m : members_of) total += m.size();

  constexpr Label kUnset = std::numeric_limits<Label>::max();
  InstanceLabeling full(total, kUnset);
  for (std::size_t v = 0; v < members_of.size(); ++v) {
    for (const auto i : members_of[v]) {
      if (i >= total || full[i] != kUnset) {
        throw ParameterError("propagate_labels: voxel members do not partition 0.." +
                             std::to_string(total - 1));
      }
      full[i] = sample_labels[v];
    }
  }
  return full;
}

}  // namespace panoclust
