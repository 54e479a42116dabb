#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace panoclust {

using Label = std::uint32_t;
using ClassId = std::uint16_t;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }
};

/// A single LiDAR return in the sensor frame (meters).
struct Point3 {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float remission = 0.0f;

  Vec3 position() const { return {x, y, z}; }
  double range() const { return position().norm(); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = double(a.x) - b.x;
  const double dy = double(a.y) - b.y;
  const double dz = double(a.z) - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3& a, const Point3& b) { return std::sqrt(squared_distance(a, b)); }

/// Ordered scan. Point indices are stable identifiers within a frame.
struct PointCloud {
  std::vector<Point3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Point3& operator[](std::size_t i) const { return points[i]; }

  /// Sub-cloud made of the given indices, in that order.
  PointCloud subset(const std::vector<std::size_t>& indices) const;
};

/// Per-point cluster ids; 0 means "not an instance".
using InstanceLabeling = std::vector<Label>;

/// Per-point semantic class plus the thing/stuff split used by evaluation.
struct SemanticLabeling {
  std::vector<ClassId> classes;
  std::set<ClassId> thing_classes;
  std::set<ClassId> stuff_classes;
  std::set<ClassId> ignore_classes;
};

struct CloudViolation {
  std::size_t index = 0;
  Point3 point;
};

/// One record per point with a non-finite coordinate; empty when the cloud is valid.
std::vector<CloudViolation> validate_cloud(const PointCloud& cloud);

}  // namespace panoclust
