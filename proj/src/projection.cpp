#include "panoclust/projection.hpp"

#include <cmath>
#include <string>

#include "panoclust/errors.hpp"

namespace panoclust {
namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

void ProjectionConfig::validate() const {
  if (rows <= 0 || cols <= 0) {
    throw ParameterError("projection needs rows > 0 and cols > 0, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  if (!(fov_up_deg > fov_down_deg)) throw ParameterError("projection needs fov_up > fov_down");
}

double ProjectionConfig::elevation_step() const {
  const double span = (fov_up_deg - fov_down_deg) * kDegToRad;
  return rows > 1 ? span / (rows - 1) : span;
}

std::optional<Pixel> pixel_of(const Point3& p, const ProjectionConfig& config) {
  const double x = p.x, y = p.y, z = p.z;
  const double horizontal = std::hypot(x, y);
  if (horizontal == 0.0 && z == 0.0) return std::nullopt;

  const double elevation = std::atan2(z, horizontal);
  const double up = config.fov_up_deg * kDegToRad;
  const double step = config.elevation_step();
  long row = 0;
  if (config.rows > 1) {
    row = std::lround((up - elevation) / step);
  } else if (elevation > up || elevation < config.fov_down_deg * kDegToRad) {
    return std::nullopt;
  }
  if (row < 0 || row >= config.rows) return std::nullopt;

  const double azimuth = std::atan2(y, x);
  const double u = 0.5 * (1.0 - azimuth / std::numbers::pi);
  auto col = static_cast<long>(std::floor(u * config.cols));
  col = ((col % config.cols) + config.cols) % config.cols;
  return Pixel{static_cast<int>(row), static_cast<int>(col)};
}

Vec3 pixel_ray(const ProjectionConfig& config, int row, int col) {
  const double elevation = config.fov_up_deg * kDegToRad - row * config.elevation_step();
  const double azimuth = std::numbers::pi * (1.0 - 2.0 * (col + 0.5) / config.cols);
  return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
}

RangeImage::RangeImage(const ProjectionConfig& config, std::size_t cloud_size)
    : config_(config), cloud_size_(cloud_size) {
  config_.validate();
  azimuth_step_ = config_.azimuth_step();
  elevation_step_ = config_.elevation_step();
  const auto n = static_cast<std::size_t>(config_.rows) * config_.cols;
  range_.assign(n, 0.0f);
  index_.assign(n, kNoPoint);
  point_.assign(n, Point3{});
}

RangeImage RangeImage::from_pixels(const ProjectionConfig& config,
                                   const std::vector<std::optional<Point3>>& pixels) {
  RangeImage image(config);
  if (pixels.size() != static_cast<std::size_t>(config.rows) * config.cols) {
    throw ParameterError("from_pixels: grid has " + std::to_string(pixels.size()) + " cells, expected " +
                         std::to_string(config.rows * config.cols));
  }
  std::size_t next = 0;
  for (int r = 0; r < config.rows; ++r) {
    for (int c = 0; c < config.cols; ++c) {
      const auto& p = pixels[image.flat(r, c)];
      if (p) image.insert(next++, *p, {r, c});
    }
  }
  image.cloud_size_ = next;
  return image;
}

void RangeImage::insert(std::size_t point_index, const Point3& p, Pixel px) {
  const auto f = flat(px.row, px.col);
  const auto r = static_cast<float>(p.range());
  if (index_[f] == kNoPoint) {
    index_[f] = point_index;
    range_[f] = r;
    point_[f] = p;
    ++occupied_;
    return;
  }
  if (r < range_[f]) {
    overflow_.push_back({index_[f], px});
    index_[f] = point_index;
    range_[f] = r;
    point_[f] = p;
  } else {
    overflow_.push_back({point_index, px});
  }
}

RangeImage project(const PointCloud& cloud, const ProjectionConfig& config) {
  RangeImage image(config, cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud[i];
    if (!p.finite()) continue;
    if (const auto px = pixel_of(p, config)) image.insert(i, p, *px);
  }
  return image;
}

InstanceLabeling unproject(const LabelGrid& labels, const RangeImage& image) {
  if (labels.rows() != image.rows() || labels.cols() != image.cols()) {
    throw ParameterError("unproject: label grid " + std::to_string(labels.rows()) + "x" +
                         std::to_string(labels.cols()) + " does not match image " + std::to_string(image.rows()) +
                         "x" + std::to_string(image.cols()));
  }
  InstanceLabeling out(image.cloud_size(), 0);
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      if (image.occupied(r, c)) out[image.point_index(r, c)] = labels.at(r, c);
    }
  }
  for (const auto& o : image.overflow()) out[o.point_index] = labels.at(o.pixel.row, o.pixel.col);
  return out;
}

}  // namespace panoclust
