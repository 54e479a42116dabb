#include "panoclust/depth.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <string>
#include <utility>

#include "panoclust/errors.hpp"

namespace panoclust {

void DepthParams::validate() const {
  if (!(theta_deg > 0.0 && theta_deg < 90.0)) throw ParameterError("depth.theta_deg must be in (0, 90)");
  if (max_skip < 1) throw ParameterError("depth.max_skip must be >= 1");
}

double beta(double d1, double d2, double alpha) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw ParameterError("beta: ranges must be positive, got " + std::to_string(d1) + ", " + std::to_string(d2));
  }
  if (d1 < d2) std::swap(d1, d2);
  // atan2 stays on the branch above pi/2 should d1 - d2*cos(alpha) reach 0.
  return std::atan2(d2 * std::sin(alpha), d1 - d2 * std::cos(alpha));
}

namespace {

struct Neighbor {
  int row;
  int col;
  int steps;
};

}  // namespace

LabelGrid depth_cluster(const RangeImage& image, const DepthParams& params, DepthStats* stats) {
  params.validate();
  const int rows = image.rows();
  const int cols = image.cols();
  const double theta = params.theta_deg * std::numbers::pi / 180.0;
  LabelGrid labels(rows, cols, 0);
  DepthStats local;

  // Nearest occupied pixel along one axis within max_skip steps.
  const auto search = [&](int r, int c, int dr, int dc) -> std::optional<Neighbor> {
    for (int s = 1; s <= params.max_skip; ++s) {
      const int nr = r + dr * s;
      if (nr < 0 || nr >= rows) return std::nullopt;
      const int nc = ((c + dc * s) % cols + cols) % cols;
      if (nr == r && nc == c) return std::nullopt;
      if (image.occupied(nr, nc)) return Neighbor{nr, nc, s};
    }
    return std::nullopt;
  };

  constexpr int kDirs[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  std::deque<std::pair<int, int>> queue;
  Label next = 1;
  for (int r0 = 0; r0 < rows; ++r0) {
    for (int c0 = 0; c0 < cols; ++c0) {
      if (!image.occupied(r0, c0) || labels.at(r0, c0) != 0) continue;
      const Label label = next++;
      ++local.components;
      labels.at(r0, c0) = label;
      queue.emplace_back(r0, c0);
      while (!queue.empty()) {
        const auto [r, c] = queue.front();
        queue.pop_front();
        const double range = image.range(r, c);
        for (const auto& d : kDirs) {
          const auto nb = search(r, c, d[0], d[1]);
          if (!nb || labels.at(nb->row, nb->col) != 0) continue;
          const double step = d[0] != 0 ? image.elevation_step() : image.azimuth_step();
          ++local.predicate_evaluations;
          if (beta(range, image.range(nb->row, nb->col), step * nb->steps) > theta) {
            labels.at(nb->row, nb->col) = label;
            queue.emplace_back(nb->row, nb->col);
          }
        }
      }
    }
  }
  if (stats) *stats = local;
  return labels;
}

}  // namespace panoclust
