#include "panoclust/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "panoclust/errors.hpp"

namespace panoclust {
namespace {

constexpr double kEps = 1e-9;

double radius_of(const Primitive& p) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return s.center.norm() + 0.5 * s.dims.norm();
        } else {
          return s.center.norm() + std::hypot(s.radius, 0.5 * s.height);
        }
      },
      p.shape);
}

}  // namespace

void SceneSpec::validate() const {
  sensor.validate();
  if (!(max_range > 0.0)) throw ParameterError("scene max_range must be > 0");
  if (noise_sigma < 0.0) throw ParameterError("scene noise must be >= 0");
  std::set<Label> seen;
  for (const auto& p : primitives) {
    if (p.instance != 0 && !seen.insert(p.instance).second) {
      throw ParameterError("scene instance id " + std::to_string(p.instance) + " used twice");
    }
    if (radius_of(p) > max_range) throw ParameterError("scene primitive lies beyond max_range");
  }
}

std::optional<double> intersect(const Vec3& origin, const Vec3& dir, const Box& box) {
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double c[3] = {box.center.x, box.center.y, box.center.z};
  const double h[3] = {0.5 * box.dims.x, 0.5 * box.dims.y, 0.5 * box.dims.z};
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double lo = c[a] - h[a], hi = c[a] + h[a];
    if (std::abs(d[a]) < kEps) {
      if (o[a] < lo || o[a] > hi) return std::nullopt;
      continue;
    }
    double t0 = (lo - o[a]) / d[a];
    double t1 = (hi - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_far <= 0.0) return std::nullopt;
  return t_near > 0.0 ? t_near : t_far;
}

std::optional<double> intersect(const Vec3& origin, const Vec3& dir, const Cylinder& cyl) {
  const double z_lo = cyl.center.z - 0.5 * cyl.height;
  const double z_hi = cyl.center.z + 0.5 * cyl.height;
  std::optional<double> best;
  const auto consider = [&](double t) {
    if (t > kEps && (!best || t < *best)) best = t;
  };

  // Side wall.
  const double ox = origin.x - cyl.center.x, oy = origin.y - cyl.center.y;
  const double a = dir.x * dir.x + dir.y * dir.y;
  if (a > kEps) {
    const double b = 2.0 * (ox * dir.x + oy * dir.y);
    const double c = ox * ox + oy * oy - cyl.radius * cyl.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        const double z = origin.z + t * dir.z;
        if (z >= z_lo && z <= z_hi) consider(t);
      }
    }
  }
  // Caps.
  if (std::abs(dir.z) > kEps) {
    for (const double zc : {z_lo, z_hi}) {
      const double t = (zc - origin.z) / dir.z;
      const double x = ox + t * dir.x, y = oy + t * dir.y;
      if (x * x + y * y <= cyl.radius * cyl.radius) consider(t);
    }
  }
  return best;
}

SyntheticFrame generate(const SceneSpec& spec) {
  spec.validate();
  SyntheticFrame frame;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);
  const Vec3 origin{};

  for (int r = 0; r < spec.sensor.rows; ++r) {
    for (int c = 0; c < spec.sensor.cols; ++c) {
      const auto dir = pixel_ray(spec.sensor, r, c);
      double best = std::numeric_limits<double>::infinity();
      ClassId cls = 0;
      Label inst = 0;
      if (spec.ground_z && dir.z < -kEps && *spec.ground_z < 0.0) {
        best = *spec.ground_z / dir.z;
        cls = spec.ground_class;
      }
      for (const auto& p : spec.primitives) {
        const auto t = std::visit([&](const auto& s) { return intersect(origin, dir, s); }, p.shape);
        if (t && *t < best) {
          best = *t;
          cls = p.class_id;
          inst = p.instance;
        }
      }
      if (!(best <= spec.max_range)) continue;
      const double range = spec.noise_sigma > 0.0 ? std::max(best + noise(rng), 1e-3) : best;
      const auto pt = dir * range;
      frame.cloud.points.push_back({static_cast<float>(pt.x), static_cast<float>(pt.y), static_cast<float>(pt.z),
                                    spec.remission});
      frame.truth.classes.push_back(cls);
      frame.truth.instances.push_back(inst);
      frame.pixels.push_back({r, c});
    }
  }
  return frame;
}

SceneSpec parse_scene(std::string_view text) {
  SceneSpec spec;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  const auto fail = [&](const std::string& why) {
    throw ConfigError("scene line " + std::to_string(line) + ": " + why);
  };
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream f(raw);
    std::string key;
    if (!(f >> key)) continue;
    if (key == "box" || key == "cylinder") {
      double v[6] = {};
      const int n = key == "box" ? 6 : 5;
      for (int i = 0; i < n; ++i)
        if (!(f >> v[i])) fail("expected " + std::to_string(n) + " numbers after '" + key + "'");
      unsigned cls = 0, inst = 0;
      if (!(f >> cls >> inst) || cls > 0xFFFF) fail("expected <class> <instance>");
      Primitive p;
      if (key == "box") {
        p.shape = Box{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
      } else {
        p.shape = Cylinder{{v[0], v[1], v[2]}, v[3], v[4]};
      }
      p.class_id = static_cast<ClassId>(cls);
      p.instance = inst;
      spec.primitives.push_back(p);
    } else if (key == "ground") {
      std::string v;
      if (!(f >> v)) fail("expected ground height or 'none'");
      if (v == "none") {
        spec.ground_z.reset();
      } else {
        try {
          spec.ground_z = std::stod(v);
        } catch (const std::exception&) {
          fail("bad ground height '" + v + "'");
        }
      }
    } else {
      double v = 0.0;
      if (!(f >> v)) fail("expected a number after '" + key + "'");
      if (key == "rows") {
        spec.sensor.rows = static_cast<int>(v);
      } else if (key == "cols") {
        spec.sensor.cols = static_cast<int>(v);
      } else if (key == "fov_up_deg") {
        spec.sensor.fov_up_deg = v;
      } else if (key == "fov_down_deg") {
        spec.sensor.fov_down_deg = v;
      } else if (key == "max_range") {
        spec.max_range = v;
      } else if (key == "noise") {
        spec.noise_sigma = v;
      } else if (key == "seed") {
        spec.seed = static_cast<std::uint64_t>(v);
      } else if (key == "ground_class") {
        spec.ground_class = static_cast<ClassId>(v);
      } else {
        fail("unknown key '" + key + "'");
      }
    }
  }
  try {
    spec.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
  return spec;
}

SceneSpec load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scene(text.str());
}

namespace {
constexpr ClassId kCar = 10;
constexpr double kCarHeight = 1.5;
}  // namespace

SceneSpec single_box_scene(std::uint64_t seed) {
  SceneSpec spec;
  spec.seed = seed;
  const double z = *spec.ground_z + 0.5 * kCarHeight;
  spec.primitives.push_back({Box{{10.0, 0.5, z}, {2.0, 4.0, kCarHeight}}, kCar, 1});
  return spec;
}

SceneSpec two_box_scene(std::uint64_t seed) {
  SceneSpec spec;
  spec.seed = seed;
  const double z = *spec.ground_z + 0.5 * kCarHeight;
  // 4 m along the line of sight, 2 m wide; lateral faces 3 m apart.
  spec.primitives.push_back({Box{{10.0, 3.5, z}, {4.0, 2.0, kCarHeight}}, kCar, 1});
  spec.primitives.push_back({Box{{10.0, 8.5, z}, {4.0, 2.0, kCarHeight}}, kCar, 2});
  return spec;
}

SceneSpec close_pair_scene(double gap, std::uint64_t seed) {
  SceneSpec spec;
  spec.seed = seed;
  const double z = *spec.ground_z + 0.5 * kCarHeight;
  const double half = 0.5 * (4.0 + gap);
  spec.primitives.push_back({Box{{10.0, -half, z}, {2.0, 4.0, kCarHeight}}, kCar, 1});
  spec.primitives.push_back({Box{{10.0, half, z}, {2.0, 4.0, kCarHeight}}, kCar, 2});
  return spec;
}

RangeImage random_dense_image(const ProjectionConfig& config, std::uint64_t seed, int patches) {
  config.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int rows = config.rows, cols = config.cols;
  std::vector<double> range(static_cast<std::size_t>(rows) * cols);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      range[static_cast<std::size_t>(r) * cols + c] =
          6.0 + 1.5 * std::sin(phase + 2.0 * std::numbers::pi * c / cols) + 0.02 * r;

  for (int p = 0; p < patches; ++p) {
    const int h = 1 + static_cast<int>(unit(rng) * rows / 3);
    const int w = 1 + static_cast<int>(unit(rng) * cols / 6);
    const int r0 = static_cast<int>(unit(rng) * rows);
    const int c0 = static_cast<int>(unit(rng) * cols);
    const double depth = 2.5 + 10.0 * unit(rng);
    const double slope = 0.02 * (unit(rng) - 0.5);
    for (int r = r0; r < std::min(rows, r0 + h); ++r)
      for (int dc = 0; dc < w; ++dc) range[static_cast<std::size_t>(r) * cols + (c0 + dc) % cols] = depth + slope * dc;
  }

  std::vector<std::optional<Point3>> pixels(range.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto i = static_cast<std::size_t>(r) * cols + c;
      const auto pt = pixel_ray(config, r, c) * range[i];
      pixels[i] = Point3{static_cast<float>(pt.x), static_cast<float>(pt.y), static_cast<float>(pt.z), 0.5f};
    }
  }
  return RangeImage::from_pixels(config, pixels);
}

}  // namespace panoclust
