#include "panoclust/slr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "panoclust/errors.hpp"

namespace panoclust {

void SlrParams::validate() const {
  if (!(th_run > 0.0)) throw ParameterError("slr.th_run must be > 0");
  if (!(th_merge > 0.0)) throw ParameterError("slr.th_merge must be > 0");
  if (nn_window < 1) throw ParameterError("slr.nn_window must be >= 1");
  if (max_gap < 0) throw ParameterError("slr.max_gap must be >= 0");
}

Label LabelStore::make() {
  const auto label = static_cast<Label>(parent_.size());
  parent_.push_back(label);
  return label;
}

Label LabelStore::find(Label label) {
  Label root = label;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[label] != root) {
    const Label up = parent_[label];
    parent_[label] = root;
    label = up;
  }
  return root;
}

Label LabelStore::merge(Label a, Label b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  return a;
}

namespace {

double separation(const Point3& a, const Point3& b, bool scalar) {
  return scalar ? std::abs(a.range() - b.range()) : distance(a, b);
}

template <typename Occupied, typename PointAt>
std::vector<Run> runs_of_row(int row, int cols, Occupied occupied, PointAt point_at, const SlrParams& params) {
  std::vector<Run> runs;
  int prev = -1;
  int first = -1;
  for (int c = 0; c < cols; ++c) {
    if (!occupied(c)) continue;
    const bool joins = prev >= 0 && c - prev - 1 <= params.max_gap &&
                       separation(point_at(c), point_at(prev), params.use_range_scalar) < params.th_run;
    if (!joins) runs.push_back(Run{row, {}, 0});
    runs.back().columns.push_back(c);
    if (first < 0) first = c;
    prev = c;
  }
  // The scan line is circular: the last run may continue into the first.
  if (runs.size() > 1) {
    const int gap = first + cols - prev - 1;
    if (gap <= params.max_gap &&
        separation(point_at(first), point_at(prev), params.use_range_scalar) < params.th_run) {
      auto& tail = runs.back().columns;
      tail.insert(tail.end(), runs.front().columns.begin(), runs.front().columns.end());
      runs.front().columns = std::move(tail);
      runs.pop_back();
    }
  }
  return runs;
}

}  // namespace

std::vector<Run> find_runs(std::span<const std::optional<Point3>> row, const SlrParams& params) {
  params.validate();
  return runs_of_row(
      0, static_cast<int>(row.size()), [&](int c) { return row[c].has_value(); },
      [&](int c) -> const Point3& { return *row[c]; }, params);
}

std::vector<Run> find_runs(const RangeImage& image, int row, const SlrParams& params) {
  params.validate();
  return runs_of_row(
      row, image.cols(), [&](int c) { return image.occupied(row, c); },
      [&](int c) -> const Point3& { return image.point(row, c); }, params);
}

LabelGrid slr_cluster(const RangeImage& image, const SlrParams& params, SlrStats* stats) {
  params.validate();
  const int rows = image.rows();
  const int cols = image.cols();
  LabelGrid labels(rows, cols, 0);
  LabelStore store;
  SlrStats local;
  std::vector<Label> matched;

  // Nearest occupied pixel of `row` within the column window around `col`.
  const auto window_nearest = [&](const Point3& q, int row, int col) {
    double best = std::numeric_limits<double>::infinity();
    Label label = 0;
    for (int dc = -params.nn_window; dc <= params.nn_window; ++dc) {
      const int c = ((col + dc) % cols + cols) % cols;
      if (!image.occupied(row, c)) continue;
      const double d = separation(q, image.point(row, c), params.use_range_scalar);
      if (d < best) {
        best = d;
        label = labels.at(row, c);
      }
    }
    return std::make_pair(best, label);
  };

  const auto brute_nearest = [&](const Point3& q, int first_row, int last_row) {
    double best = std::numeric_limits<double>::infinity();
    Label label = 0;
    for (int r = std::max(first_row, 0); r <= last_row; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (!image.occupied(r, c)) continue;
        const double d = separation(q, image.point(r, c), params.use_range_scalar);
        if (d < best) {
          best = d;
          label = labels.at(r, c);
        }
      }
    }
    return std::make_pair(best, label);
  };

  for (int row = 0; row < rows; ++row) {
    auto runs = find_runs(image, row, params);
    local.runs += runs.size();
    for (auto& run : runs) {
      matched.clear();
      if (row > 0) {
        for (const int c : run.columns) {
          ++local.nn_queries;
          const auto [d, label] = window_nearest(image.point(row, c), row - 1, c);
          if (label != 0 && d < params.th_merge) matched.push_back(store.find(label));
        }
        if (matched.empty() && params.makeup_search) {
          ++local.makeup_triggers;
          for (const int c : run.columns) {
            ++local.makeup_queries;
            const auto [d, label] = brute_nearest(image.point(row, c), row - 2, row - 1);
            if (label != 0 && d < params.th_merge) matched.push_back(store.find(label));
          }
        }
      }
      if (matched.empty()) {
        run.label = store.make();
      } else {
        run.label = *std::min_element(matched.begin(), matched.end());
        for (const auto other : matched) store.merge(run.label, other);
        run.label = store.find(run.label);
      }
      for (const int c : run.columns) labels.at(row, c) = run.label;
    }
  }

  for (auto& l : labels.data()) {
    if (l != 0) l = store.find(l);
  }
  if (stats) *stats = local;
  return labels;
}

}  // namespace panoclust
