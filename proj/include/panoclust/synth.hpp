#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "panoclust/panoptic.hpp"
#include "panoclust/projection.hpp"

namespace panoclust {

/// Axis-aligned box.
struct Box {
  Vec3 center;
  Vec3 dims;  ///< full extents along x, y, z
};

/// Upright cylinder; center is the middle of its axis.
struct Cylinder {
  Vec3 center;
  double radius = 0.0;
  double height = 0.0;
};

struct Primitive {
  std::variant<Box, Cylinder> shape;
  ClassId class_id = 0;
  Label instance = 0;
};

struct SceneSpec {
  std::vector<Primitive> primitives;
  std::optional<double> ground_z = -1.73;  ///< horizontal ground plane, sensor at the origin
  ClassId ground_class = 40;
  ProjectionConfig sensor;
  double max_range = 80.0;
  double noise_sigma = 0.01;  ///< Gaussian range noise (m)
  std::uint64_t seed = 0;
  float remission = 0.5f;

  /// Non-zero instance ids unique; primitives inside max_range.
  void validate() const;
};

struct SyntheticFrame {
  PointCloud cloud;
  PanopticFrame truth;
  std::vector<Pixel> pixels;  ///< source ray of each point
};

/// Distance along a unit ray from the origin to the first hit in front of it.
std::optional<double> intersect(const Vec3& origin, const Vec3& dir, const Box& box);
std::optional<double> intersect(const Vec3& origin, const Vec3& dir, const Cylinder& cylinder);

/// One ray per pixel of the sensor; the nearest surface within max_range
/// returns a noisy point labeled with that surface's class and instance.
SyntheticFrame generate(const SceneSpec& spec);

/// Line-based scene description, '#' comments:
///
///     rows 64 | cols 2048 | fov_up_deg 3 | fov_down_deg -25
///     max_range 80 | noise 0.01 | seed 7 | ground -1.73 | ground none | ground_class 40
///     box <cx> <cy> <cz> <dx> <dy> <dz> <class> <instance>
///     cylinder <cx> <cy> <cz> <radius> <height> <class> <instance>
SceneSpec parse_scene(std::string_view text);
SceneSpec load_scene(const std::filesystem::path& path);

/// Two 2 x 4 x 1.5 m cars about 10 m away, 3 m apart laterally.
SceneSpec two_box_scene(std::uint64_t seed = 1);
/// One 2 x 4 x 1.5 m car about 10 m away.
SceneSpec single_box_scene(std::uint64_t seed = 1);
/// Two cars side by side with the given gap, long sides facing the sensor.
SceneSpec close_pair_scene(double gap, std::uint64_t seed = 1);

/// Fully occupied image: a smooth background with random rectangular
/// patches at other depths. Points lie on their pixel's ray.
RangeImage random_dense_image(const ProjectionConfig& config, std::uint64_t seed, int patches = 12);

}  // namespace panoclust
