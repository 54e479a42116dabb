#include "panoclust/supervoxel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "panoclust/errors.hpp"

namespace panoclust {
namespace {

struct KeyHash {
  std::size_t operator()(const VoxelKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

constexpr auto kUnowned = std::numeric_limits<std::size_t>::max();

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency build_adjacency(const VoxelPartition& voxels) {
  std::unordered_map<VoxelKey, std::size_t, KeyHash> index;
  index.reserve(voxels.keys.size());
  for (std::size_t v = 0; v < voxels.keys.size(); ++v) index.emplace(voxels.keys[v], v);
  Adjacency adj(voxels.keys.size());
  for (std::size_t v = 0; v < voxels.keys.size(); ++v) {
    for (const auto& off : voxel_neighbor_offsets()) {
      const auto& k = voxels.keys[v];
      const auto it = index.find({k[0] + off[0], k[1] + off[1], k[2] + off[2]});
      if (it != index.end()) adj[v].push_back(it->second);
    }
  }
  return adj;
}

/// Best-first growth from every seed; a voxel is only reachable through an
/// adjacent voxel its cluster already owns.
std::vector<std::size_t> grow(const std::vector<std::size_t>& seeds, const std::vector<Surfel>& centroids,
                              const std::vector<Surfel>& surfels, const Adjacency& adj,
                              const SupervoxelParams& params) {
  using Entry = std::tuple<double, std::size_t, std::size_t>;  // distance, cluster, voxel
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<std::size_t> owner(surfels.size(), kUnowned);
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    heap.emplace(sv_distance(surfels[seeds[c]], centroids[c], params), c, seeds[c]);
  }
  while (!heap.empty()) {
    const auto [d, c, v] = heap.top();
    heap.pop();
    if (owner[v] != kUnowned) continue;
    owner[v] = c;
    for (const auto nb : adj[v]) {
      if (owner[nb] == kUnowned) heap.emplace(sv_distance(surfels[nb], centroids[c], params), c, nb);
    }
  }
  return owner;
}

}  // namespace

void SupervoxelParams::validate() const {
  if (w_c < 0.0 || w_s < 0.0 || w_n < 0.0) throw ParameterError("supervoxel weights must be >= 0");
  if (!(voxel_resolution > 0.0)) throw ParameterError("supervoxel.voxel_resolution must be > 0");
  if (!(seed_resolution >= voxel_resolution)) {
    throw ParameterError("supervoxel.seed_resolution must be >= voxel_resolution");
  }
  if (refinement_iterations < 0) throw ParameterError("supervoxel.refinement_iterations must be >= 0");
  if (normal_k < 3) throw ParameterError("supervoxel.normal_k must be >= 3");
  if (min_seed_voxels < 1) throw ParameterError("supervoxel.min_seed_voxels must be >= 1");
}

const std::vector<VoxelKey>& voxel_neighbor_offsets() {
  static const std::vector<VoxelKey> offsets = [] {
    std::vector<VoxelKey> out;
    for (std::int64_t i = -1; i <= 1; ++i)
      for (std::int64_t j = -1; j <= 1; ++j)
        for (std::int64_t k = -1; k <= 1; ++k)
          if (i != 0 || j != 0 || k != 0) out.push_back({i, j, k});
    return out;
  }();
  return offsets;
}

double sv_distance(const Surfel& p, const Surfel& centroid, const SupervoxelParams& params) {
  const double spatial2 = (p.position - centroid.position).squared_norm();
  const double normal = std::clamp(1.0 - std::abs(p.normal.dot(centroid.normal)), 0.0, 1.0);
  const double r = params.seed_resolution;
  return std::sqrt(params.w_s * spatial2 / (3.0 * r * r) + params.w_n * normal * normal);
}

SupervoxelSegmentation supervoxel_segment(const PointCloud& cloud, const SupervoxelParams& params) {
  params.validate();
  SupervoxelSegmentation seg;
  if (cloud.empty()) return seg;

  seg.voxels = partition_voxels(cloud, params.voxel_resolution);
  const auto& voxels = seg.voxels;
  const std::size_t n = voxels.members.size();

  std::vector<Vec3> centers(n);
  for (std::size_t v = 0; v < n; ++v) {
    Vec3 sum;
    for (const auto i : voxels.members[v]) sum = sum + cloud[i].position();
    centers[v] = sum * (1.0 / static_cast<double>(voxels.members[v].size()));
  }
  const auto normals = estimate_normals(centers, static_cast<std::size_t>(params.normal_k), params.voxel_resolution);
  seg.voxel_surfels.resize(n);
  for (std::size_t v = 0; v < n; ++v) seg.voxel_surfels[v] = {centers[v], normals[v].direction};
  const auto adj = build_adjacency(voxels);

  // Seed cells share the voxel grid's anchor.
  const double res = params.voxel_resolution;
  const double big = params.seed_resolution;
  std::map<VoxelKey, std::vector<std::size_t>> cells;
  std::vector<VoxelKey> cell_order;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& k = voxels.keys[v];
    const VoxelKey cell{static_cast<std::int64_t>(std::floor((k[0] + 0.5) * res / big)),
                        static_cast<std::int64_t>(std::floor((k[1] + 0.5) * res / big)),
                        static_cast<std::int64_t>(std::floor((k[2] + 0.5) * res / big))};
    auto& members = cells[cell];
    if (members.empty()) cell_order.push_back(cell);
    members.push_back(v);
  }
  for (const auto& cell : cell_order) {
    const auto& members = cells[cell];
    if (members.size() < static_cast<std::size_t>(params.min_seed_voxels)) continue;
    const Vec3 center{(cell[0] + 0.5) * big, (cell[1] + 0.5) * big, (cell[2] + 0.5) * big};
    std::size_t best = members.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto v : members) {
      const auto& k = voxels.keys[v];
      const Vec3 vc{(k[0] + 0.5) * res, (k[1] + 0.5) * res, (k[2] + 0.5) * res};
      const double d = (vc - center).squared_norm();
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    seg.seeds.push_back(best);
  }

  std::vector<std::size_t> seeds = seg.seeds;
  std::vector<Surfel> centroids;
  for (const auto s : seeds) centroids.push_back(seg.voxel_surfels[s]);
  auto owner = grow(seeds, centroids, seg.voxel_surfels, adj, params);

  for (int iter = 0; iter < params.refinement_iterations; ++iter) {
    std::vector<std::vector<std::size_t>> members(seeds.size());
    for (std::size_t v = 0; v < n; ++v) {
      if (owner[v] != kUnowned) members[owner[v]].push_back(v);
    }
    std::vector<std::size_t> next_seeds;
    std::vector<Surfel> next_centroids;
    for (std::size_t c = 0; c < seeds.size(); ++c) {
      if (members[c].empty()) continue;
      Vec3 pos;
      Vec3 nsum;
      const Vec3 ref = centroids[c].normal;
      for (const auto v : members[c]) {
        pos = pos + seg.voxel_surfels[v].position;
        if (normals[v].degenerate) continue;
        const auto& nv = seg.voxel_surfels[v].normal;
        nsum = nsum + (nv.dot(ref) < 0.0 ? nv * -1.0 : nv);
      }
      Surfel centroid{pos * (1.0 / static_cast<double>(members[c].size())), ref};
      if (nsum.norm() > 1e-12) centroid.normal = nsum * (1.0 / nsum.norm());
      std::size_t best = members[c].front();
      double best_d = std::numeric_limits<double>::infinity();
      for (const auto v : members[c]) {
        const double d = sv_distance(seg.voxel_surfels[v], centroid, params);
        if (d < best_d) {
          best_d = d;
          best = v;
        }
      }
      next_seeds.push_back(best);
      next_centroids.push_back(centroid);
    }
    seeds = std::move(next_seeds);
    centroids = std::move(next_centroids);
    owner = grow(seeds, centroids, seg.voxel_surfels, adj, params);
  }

  // Voxels no seed could reach (unseeded components) become their own clusters.
  std::size_t cluster_count = seeds.size();
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (owner[v] != kUnowned) continue;
    const auto c = cluster_count++;
    ++seg.orphan_clusters;
    owner[v] = c;
    queue.push_back(v);
    Vec3 pos;
    std::size_t count = 0;
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      pos = pos + seg.voxel_surfels[cur].position;
      ++count;
      for (const auto nb : adj[cur]) {
        if (owner[nb] == kUnowned) {
          owner[nb] = c;
          queue.push_back(nb);
        }
      }
    }
    centroids.push_back({pos * (1.0 / static_cast<double>(count)), seg.voxel_surfels[v].normal});
  }

  // Compact to 1.. in cluster order, dropping clusters that lost every voxel.
  std::vector<Label> remap(cluster_count, 0);
  for (std::size_t v = 0; v < n; ++v) remap[owner[v]] = 1;
  Label next = 1;
  for (std::size_t c = 0; c < cluster_count; ++c) {
    if (remap[c] != 0) {
      remap[c] = next++;
      seg.centroids.push_back(centroids[c]);
    }
  }
  seg.voxel_labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) seg.voxel_labels[v] = remap[owner[v]];
  return seg;
}

InstanceLabeling supervoxel_cluster(const PointCloud& cloud, const SupervoxelParams& params) {
  const auto seg = supervoxel_segment(cloud, params);
  InstanceLabeling labels(cloud.size(), 0);
  for (std::size_t v = 0; v < seg.voxel_labels.size(); ++v) {
    for (const auto i : seg.voxels.members[v]) labels[i] = seg.voxel_labels[v];
  }
  return labels;
}

}  // namespace panoclust
