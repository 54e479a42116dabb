#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panoclust/classes.hpp"
#include "panoclust/panoptic.hpp"

namespace panoclust {

struct ClassMetrics {
  ClassId id = 0;
  std::string name;
  bool thing = false;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double iou_sum = 0.0;  ///< summed IoU of matched segment pairs
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  double iou = 0.0;      ///< semantic IoU
  bool evaluated = false;      ///< has any panoptic segment (tp + fp + fn > 0)
  bool iou_evaluated = false;  ///< has a non-empty semantic union
};

/// All values are fractions in [0, 1]; the text renderers print percentages.
struct MetricsReport {
  std::vector<ClassMetrics> classes;
  double pq = 0.0;
  double pq_dagger = 0.0;
  double rq = 0.0;
  double sq = 0.0;
  double pq_things = 0.0;
  double rq_things = 0.0;
  double sq_things = 0.0;
  double pq_stuff = 0.0;
  double rq_stuff = 0.0;
  double sq_stuff = 0.0;
  double miou = 0.0;
  std::size_t min_points = 0;
  std::size_t frames = 0;

  const ClassMetrics* find(ClassId id) const&;
  const ClassMetrics* find(ClassId id) const&& = delete;
  std::string to_table() const;
  /// One "key=value" per line, percentages with one decimal.
  std::string to_key_values() const;
};

/// Dataset-wide panoptic accumulator. Segment matches need IoU > 0.5; ground
/// truth thing instances with fewer than min_points points are treated as void
/// (their points leave every intersection and union). Classes with no
/// segments at all are left out of the averages.
class PanopticEvaluator {
 public:
  explicit PanopticEvaluator(ClassConfig classes, std::size_t min_points = 50);

  void add_frame(const PanopticFrame& gt, const PanopticFrame& pred, std::string_view frame_id = {});
  /// Associative and commutative accumulator merge.
  void merge(const PanopticEvaluator& other);
  MetricsReport report() const;

  std::size_t min_points() const { return min_points_; }

 private:
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
    double iou_sum = 0.0;
    std::size_t intersection = 0, gt_points = 0, pred_points = 0;
  };

  ClassConfig classes_;
  std::set<ClassId> things_;
  std::size_t min_points_;
  std::size_t frames_ = 0;
  std::map<ClassId, Counts> counts_;
};

MetricsReport panoptic_quality(std::span<const PanopticFrame> gt, std::span<const PanopticFrame> pred,
                               const ClassConfig& classes, std::size_t min_points = 50);

struct IouResult {
  std::map<ClassId, double> per_class;
  double mean = 0.0;
};

/// Semantic IoU per evaluated class; points whose ground truth is an ignore
/// class are skipped, classes with an empty union are left out of the mean.
IouResult miou(std::span<const ClassId> gt, std::span<const ClassId> pred, const ClassConfig& classes);

}  // namespace panoclust
