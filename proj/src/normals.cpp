#include "panoclust/normals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "panoclust/errors.hpp"
#include "panoclust/spatial_grid.hpp"

namespace panoclust {
namespace {

Vec3 orient(Vec3 n, const Vec3& p) {
  const double s = n.dot(p);
  const double tol = 1e-9 * (p.norm() + 1.0);
  bool flip = false;
  if (s > tol) {
    flip = true;
  } else if (std::abs(s) <= tol) {
    if (std::abs(n.z) > 1e-12) {
      flip = n.z < 0.0;
    } else if (std::abs(n.x) > 1e-12) {
      flip = n.x < 0.0;
    } else {
      flip = n.y < 0.0;
    }
  }
  return flip ? n * -1.0 : n;
}

double default_cell(std::span<const Vec3> points) {
  Vec3 lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double diag = (hi - lo).norm();
  return std::max(diag / std::cbrt(static_cast<double>(points.size())), 1e-6);
}

}  // namespace

std::vector<Normal> estimate_normals(std::span<const Vec3> points, std::size_t k, double cell_size) {
  if (k < 3) throw ParameterError("normal estimation needs k >= 3");
  if (points.empty()) throw ParameterError("normal estimation needs a non-empty cloud");

  const SpatialGrid grid(points, cell_size > 0.0 ? cell_size : default_cell(points));
  std::vector<Normal> normals(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto nbrs = grid.nearest(points[i], k);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto j : nbrs) mean += Eigen::Vector3d(points[j].x, points[j].y, points[j].z);
    mean /= static_cast<double>(nbrs.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto j : nbrs) {
      const Eigen::Vector3d d = Eigen::Vector3d(points[j].x, points[j].y, points[j].z) - mean;
      cov += d * d.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const auto& ev = solver.eigenvalues();  // ascending
    if (nbrs.size() < 3 || ev(1) <= 1e-10 * std::max(ev(2), 1e-300)) {
      normals[i] = Normal{{0.0, 0.0, 1.0}, true};
      continue;
    }
    const Eigen::Vector3d v = solver.eigenvectors().col(0).normalized();
    normals[i] = Normal{orient({v.x(), v.y(), v.z()}, points[i]), false};
  }
  return normals;
}

std::vector<Normal> estimate_normals(const PointCloud& cloud, std::size_t k) {
  const auto pts = positions(cloud);
  return estimate_normals(pts, k);
}

}  // namespace panoclust
