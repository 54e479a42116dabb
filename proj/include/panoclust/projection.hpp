#pragma once

#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "panoclust/cloud.hpp"

namespace panoclust {

/// Spherical projection geometry. Defaults follow a 64-beam HDL-64E.
struct ProjectionConfig {
  int rows = 64;
  int cols = 2048;
  double fov_up_deg = 3.0;
  double fov_down_deg = -25.0;

  void validate() const;
  /// Horizontal angle between adjacent columns (radians).
  double azimuth_step() const { return 2.0 * std::numbers::pi / cols; }
  /// Vertical angle between adjacent rows (radians); row 0 looks at fov_up.
  double elevation_step() const;
};

struct Pixel {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Pixel hit by a point, or nullopt when outside the vertical field of view.
std::optional<Pixel> pixel_of(const Point3& p, const ProjectionConfig& config);

/// Unit ray through the center of a pixel; pixel_of(ray * r) == {row, col}.
Vec3 pixel_ray(const ProjectionConfig& config, int row, int col);

/// Row-major rows x cols label image.
class LabelGrid {
 public:
  LabelGrid() = default;
  LabelGrid(int rows, int cols, Label fill = 0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Label& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  Label at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const std::vector<Label>& data() const { return data_; }
  std::vector<Label>& data() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Label> data_;
};

/// Organized view of a scan. Each occupied pixel keeps its nearest point;
/// points that lost a pixel collision are kept in the overflow list.
class RangeImage {
 public:
  static constexpr std::size_t kNoPoint = std::numeric_limits<std::size_t>::max();

  struct Overflow {
    std::size_t point_index;
    Pixel pixel;
  };

  RangeImage() = default;
  explicit RangeImage(const ProjectionConfig& config, std::size_t cloud_size = 0);

  /// Builds an image directly from a row-major pixel grid. Occupied pixels
  /// get point indices 0, 1, ... in row-major order.
  static RangeImage from_pixels(const ProjectionConfig& config,
                                const std::vector<std::optional<Point3>>& pixels);

  int rows() const { return config_.rows; }
  int cols() const { return config_.cols; }
  const ProjectionConfig& config() const { return config_; }
  double azimuth_step() const { return azimuth_step_; }
  double elevation_step() const { return elevation_step_; }

  bool occupied(int r, int c) const { return index_[flat(r, c)] != kNoPoint; }
  float range(int r, int c) const { return range_[flat(r, c)]; }
  std::size_t point_index(int r, int c) const { return index_[flat(r, c)]; }
  const Point3& point(int r, int c) const { return point_[flat(r, c)]; }

  const std::vector<Overflow>& overflow() const { return overflow_; }
  /// Size of the cloud this image was built from.
  std::size_t cloud_size() const { return cloud_size_; }
  std::size_t occupied_count() const { return occupied_; }

  /// Places a point, applying the nearer-wins collision rule.
  void insert(std::size_t point_index, const Point3& p, Pixel px);

 private:
  std::size_t flat(int r, int c) const { return static_cast<std::size_t>(r) * config_.cols + c; }

  ProjectionConfig config_;
  double azimuth_step_ = 0.0;
  double elevation_step_ = 0.0;
  std::vector<float> range_;
  std::vector<std::size_t> index_;
  std::vector<Point3> point_;
  std::vector<Overflow> overflow_;
  std::size_t cloud_size_ = 0;
  std::size_t occupied_ = 0;
};

RangeImage project(const PointCloud& cloud, const ProjectionConfig& config = {});

/// Copies pixel labels back to points; overflow points take their pixel's
/// label and points outside the image get 0.
InstanceLabeling unproject(const LabelGrid& labels, const RangeImage& image);

}  // namespace panoclust
