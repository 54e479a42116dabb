#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <tuple>
#include <unordered_map>

namespace oracle {

using panoclust::Point3;
using panoclust::RangeImage;
using panoclust::Vec3;

DisjointSets::DisjointSets(std::size_t n) : parent_(n) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
}

std::size_t DisjointSets::find(std::size_t i) {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

void DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a != b) parent_[std::max(a, b)] = std::min(a, b);
}

std::vector<Label> DisjointSets::labels() {
  std::vector<Label> out(parent_.size());
  std::unordered_map<std::size_t, Label> id;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    const auto [it, fresh] = id.try_emplace(find(i), static_cast<Label>(id.size() + 1));
    out[i] = it->second;
  }
  return out;
}

bool same_partition(const std::vector<Label>& a, const std::vector<Label>& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<Label, Label> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] == 0) != (b[i] == 0)) return false;
    if (a[i] == 0) continue;
    const auto [x, fx] = ab.try_emplace(a[i], b[i]);
    const auto [y, fy] = ba.try_emplace(b[i], a[i]);
    if (x->second != b[i] || y->second != a[i]) return false;
  }
  return true;
}

std::size_t count_clusters(const std::vector<Label>& labels) {
  std::set<Label> s(labels.begin(), labels.end());
  s.erase(0);
  return s.size();
}

std::vector<Label> radius_graph_components(const std::vector<Vec3>& points, double d_th) {
  DisjointSets sets(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dx = points[i].x - points[j].x;
      const double dy = points[i].y - points[j].y;
      const double dz = points[i].z - points[j].z;
      if (std::sqrt(dx * dx + dy * dy + dz * dz) < d_th) sets.unite(i, j);
    }
  }
  return sets.labels();
}

double beta_by_triangle(double d1, double d2, double alpha) {
  const double far = std::max(d1, d2);
  const double near = std::min(d1, d2);
  const double side = std::sqrt(far * far + near * near - 2.0 * far * near * std::cos(alpha));
  // Angle at the far return, between the line to the sensor and the line to
  // the near return.
  const double c = (far * far + side * side - near * near) / (2.0 * far * side);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

std::vector<Label> depth_flood_fill(const RangeImage& image, double theta_deg) {
  const int rows = image.rows();
  const int cols = image.cols();
  const double theta = theta_deg * std::numbers::pi / 180.0;
  const auto at = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
  const auto joins = [&](int r1, int c1, int r2, int c2, double alpha) {
    const double a = image.range(r1, c1);
    const double b = image.range(r2, c2);
    const double d1 = std::max(a, b);
    const double d2 = std::min(a, b);
    return std::atan2(d2 * std::sin(alpha), d1 - d2 * std::cos(alpha)) > theta;
  };
  DisjointSets sets(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!image.occupied(r, c)) continue;
      const int right = (c + 1) % cols;
      if (right != c && image.occupied(r, right) && joins(r, c, r, right, image.azimuth_step()))
        sets.unite(at(r, c), at(r, right));
      if (r + 1 < rows && image.occupied(r + 1, c) && joins(r, c, r + 1, c, image.elevation_step()))
        sets.unite(at(r, c), at(r + 1, c));
    }
  }
  auto labels = sets.labels();
  // Holes become 0, the rest is renumbered.
  std::unordered_map<Label, Label> renum;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      auto& l = labels[at(r, c)];
      if (!image.occupied(r, c)) {
        l = 0;
        continue;
      }
      l = renum.try_emplace(l, static_cast<Label>(renum.size() + 1)).first->second;
    }
  }
  return labels;
}

namespace {

double dist(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

std::vector<Label> slr_graph_components(const RangeImage& image, const SlrGraphOptions& o) {
  const int rows = image.rows();
  const int cols = image.cols();
  const auto at = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
  DisjointSets sets(static_cast<std::size_t>(rows) * cols);

  std::vector<std::vector<std::vector<int>>> runs(rows);
  for (int r = 0; r < rows; ++r) {
    std::vector<int> occ;
    for (int c = 0; c < cols; ++c)
      if (image.occupied(r, c)) occ.push_back(c);
    DisjointSets row_sets(occ.size());
    for (std::size_t k = 0; k < occ.size() && occ.size() > 1; ++k) {
      const std::size_t next = (k + 1) % occ.size();
      const int gap = ((occ[next] - occ[k] - 1) % cols + cols) % cols;
      if (gap <= o.max_gap && dist(image.point(r, occ[k]), image.point(r, occ[next])) < o.th_run) {
        row_sets.unite(k, next);
        sets.unite(at(r, occ[k]), at(r, occ[next]));
      }
    }
    std::map<std::size_t, std::vector<int>> by_root;
    for (std::size_t k = 0; k < occ.size(); ++k) by_root[row_sets.find(k)].push_back(occ[k]);
    for (auto& [root, members] : by_root) runs[r].push_back(std::move(members));
  }

  for (int r = 1; r < rows; ++r) {
    for (const auto& run : runs[r]) {
      bool linked = false;
      for (const int c : run) {
        double best = std::numeric_limits<double>::infinity();
        int best_col = -1;
        for (int dc = -o.nn_window; dc <= o.nn_window; ++dc) {
          const int cc = ((c + dc) % cols + cols) % cols;
          if (!image.occupied(r - 1, cc)) continue;
          const double d = dist(image.point(r, c), image.point(r - 1, cc));
          if (d < best) best = d, best_col = cc;
        }
        if (best_col >= 0 && best < o.th_merge) {
          sets.unite(at(r, c), at(r - 1, best_col));
          linked = true;
        }
      }
      if (linked || !o.makeup) continue;
      for (const int c : run) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_at = 0;
        for (int rr = std::max(r - 2, 0); rr <= r - 1; ++rr) {
          for (int cc = 0; cc < cols; ++cc) {
            if (!image.occupied(rr, cc)) continue;
            const double d = dist(image.point(r, c), image.point(rr, cc));
            if (d < best) best = d, best_at = at(rr, cc);
          }
        }
        if (best < o.th_merge) sets.unite(at(r, c), best_at);
      }
    }
  }

  auto labels = sets.labels();
  std::unordered_map<Label, Label> renum;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      auto& l = labels[at(r, c)];
      if (!image.occupied(r, c)) {
        l = 0;
        continue;
      }
      l = renum.try_emplace(l, static_cast<Label>(renum.size() + 1)).first->second;
    }
  }
  return labels;
}

std::size_t voxel_count(const panoclust::PointCloud& cloud, double edge) {
  if (cloud.empty()) return 0;
  double mx = std::numeric_limits<double>::infinity(), my = mx, mz = mx;
  for (const auto& p : cloud.points) {
    mx = std::min(mx, double(p.x));
    my = std::min(my, double(p.y));
    mz = std::min(mz, double(p.z));
  }
  std::set<std::tuple<long long, long long, long long>> cells;
  for (const auto& p : cloud.points) {
    cells.emplace(static_cast<long long>(std::floor((p.x - mx) / edge)),
                  static_cast<long long>(std::floor((p.y - my) / edge)),
                  static_cast<long long>(std::floor((p.z - mz) / edge)));
  }
  return cells.size();
}

std::map<ClassId, double> confusion_iou(const std::vector<ClassId>& gt, const std::vector<ClassId>& pred,
                                        const panoclust::ClassConfig& classes) {
  std::vector<ClassId> ids;
  for (const auto c : classes.thing_classes()) ids.push_back(c);
  for (const auto c : classes.stuff_classes()) ids.push_back(c);
  std::sort(ids.begin(), ids.end());
  const auto index = [&](ClassId raw) -> int {
    if (classes.is_ignore(raw)) return -1;
    const auto c = *classes.canonical(raw);
    return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), c) - ids.begin());
  };
  const std::size_t k = ids.size();
  std::vector<std::vector<std::size_t>> conf(k, std::vector<std::size_t>(k + 1, 0));  // last column: ignore
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const int g = index(gt[i]);
    if (g < 0) continue;
    const int p = index(pred[i]);
    ++conf[g][p < 0 ? k : static_cast<std::size_t>(p)];
  }
  std::map<ClassId, double> out;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = conf[c][c], fn = 0, fp = 0;
    for (std::size_t j = 0; j <= k; ++j)
      if (j != c) fn += conf[c][j];
    for (std::size_t g = 0; g < k; ++g)
      if (g != c) fp += conf[g][c];
    if (tp + fp + fn > 0) out[ids[c]] = double(tp) / double(tp + fp + fn);
  }
  return out;
}

namespace {

template <typename Inside>
std::optional<double> march(const Vec3& dir, double max_range, Inside inside) {
  const double step = 1e-3;
  for (double t = step; t <= max_range; t += step) {
    if (!inside(dir * t)) continue;
    double lo = t - step, hi = t;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (inside(dir * mid) ? hi : lo) = mid;
    }
    return hi;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> march_box(const Vec3& dir, const Vec3& center, const Vec3& dims, double max_range) {
  return march(dir, max_range, [&](const Vec3& p) {
    return std::abs(p.x - center.x) <= dims.x / 2 && std::abs(p.y - center.y) <= dims.y / 2 &&
           std::abs(p.z - center.z) <= dims.z / 2;
  });
}

std::optional<double> march_cylinder(const Vec3& dir, const Vec3& center, double radius, double height,
                                     double max_range) {
  return march(dir, max_range, [&](const Vec3& p) {
    const double dx = p.x - center.x, dy = p.y - center.y;
    return dx * dx + dy * dy <= radius * radius && std::abs(p.z - center.z) <= height / 2;
  });
}

}  // namespace oracle
