#include "panoclust/metrics.hpp"

#include <array>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "panoclust/errors.hpp"

namespace panoclust {
namespace {

std::string frame_tag(std::string_view id) { return id.empty() ? std::string("frame") : "frame " + std::string(id); }

ClassId canonical_or_throw(const ClassConfig& classes, ClassId raw, std::size_t point, std::string_view frame,
                           const char* side) {
  const auto c = classes.canonical(raw);
  if (!c) {
    throw EvaluationError(frame_tag(frame) + ": unknown " + side + " class " + std::to_string(raw) + " at point " +
                          std::to_string(point));
  }
  return *c;
}

std::uint64_t segment_key(ClassId cls, Label instance) { return (std::uint64_t{cls} << 32) | instance; }
ClassId class_of(std::uint64_t key) { return static_cast<ClassId>(key >> 32); }

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

}  // namespace

PanopticEvaluator::PanopticEvaluator(ClassConfig classes, std::size_t min_points)
    : classes_(std::move(classes)), things_(classes_.thing_classes()), min_points_(min_points) {}

void PanopticEvaluator::add_frame(const PanopticFrame& gt, const PanopticFrame& pred, std::string_view frame_id) {
  const auto n = gt.size();
  if (gt.instances.size() != n || pred.size() != n || pred.instances.size() != n) {
    throw EvaluationError(frame_tag(frame_id) + ": ground truth has " + std::to_string(n) + " points, prediction " +
                          std::to_string(pred.size()));
  }

  std::vector<ClassId> gt_cls(n), pred_cls(n);
  std::vector<char> gt_valid(n), pred_valid(n);
  for (std::size_t i = 0; i < n; ++i) {
    gt_cls[i] = canonical_or_throw(classes_, gt.classes[i], i, frame_id, "ground-truth");
    pred_cls[i] = canonical_or_throw(classes_, pred.classes[i], i, frame_id, "predicted");
    gt_valid[i] = !classes_.is_ignore(gt.classes[i]);
    pred_valid[i] = !classes_.is_ignore(pred.classes[i]);
  }

  // Semantic channel.
  for (std::size_t i = 0; i < n; ++i) {
    if (!gt_valid[i]) continue;
    ++counts_[gt_cls[i]].gt_points;
    if (!pred_valid[i]) continue;
    ++counts_[pred_cls[i]].pred_points;
    if (gt_cls[i] == pred_cls[i]) ++counts_[gt_cls[i]].intersection;
  }

  // Segments: (class, instance) for things, (class, 0) for stuff.
  const auto gt_segment = [&](std::size_t i) {
    return segment_key(gt_cls[i], classes_.is_thing(gt.classes[i]) ? gt.instances[i] : 0);
  };
  const auto pred_segment = [&](std::size_t i) {
    return segment_key(pred_cls[i], classes_.is_thing(pred.classes[i]) ? pred.instances[i] : 0);
  };

  std::unordered_map<std::uint64_t, std::size_t> gt_area;
  for (std::size_t i = 0; i < n; ++i)
    if (gt_valid[i]) ++gt_area[gt_segment(i)];
  std::vector<char> keep(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!gt_valid[i]) continue;
    const bool small = classes_.is_thing(gt.classes[i]) && gt_area[gt_segment(i)] < min_points_;
    keep[i] = !small;
  }
  for (auto it = gt_area.begin(); it != gt_area.end();) {
    const auto cls = class_of(it->first);
    const bool thing = things_.count(cls) != 0;
    if (thing && it->second < min_points_) {
      it = gt_area.erase(it);
    } else {
      ++it;
    }
  }

  std::unordered_map<std::uint64_t, std::size_t> pred_area;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> overlap;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i] || !pred_valid[i]) continue;
    const auto p = pred_segment(i);
    ++pred_area[p];
    const auto g = gt_segment(i);
    if (class_of(g) == class_of(p)) ++overlap[{g, p}];
  }

  std::unordered_map<std::uint64_t, char> gt_matched, pred_matched;
  for (const auto& [pair, inter] : overlap) {
    const auto& [g, p] = pair;
    const double uni = double(gt_area[g]) + double(pred_area[p]) - double(inter);
    const double iou = double(inter) / uni;
    if (iou > 0.5) {
      auto& c = counts_[class_of(g)];
      ++c.tp;
      c.iou_sum += iou;
      gt_matched[g] = 1;
      pred_matched[p] = 1;
    }
  }
  for (const auto& [g, area] : gt_area)
    if (!gt_matched.count(g)) ++counts_[class_of(g)].fn;
  for (const auto& [p, area] : pred_area)
    if (!pred_matched.count(p)) ++counts_[class_of(p)].fp;
  ++frames_;
}

void PanopticEvaluator::merge(const PanopticEvaluator& other) {
  if (other.min_points_ != min_points_) throw EvaluationError("cannot merge evaluators with different min_points");
  for (const auto& [cls, c] : other.counts_) {
    auto& mine = counts_[cls];
    mine.tp += c.tp;
    mine.fp += c.fp;
    mine.fn += c.fn;
    mine.iou_sum += c.iou_sum;
    mine.intersection += c.intersection;
    mine.gt_points += c.gt_points;
    mine.pred_points += c.pred_points;
  }
  frames_ += other.frames_;
}

MetricsReport PanopticEvaluator::report() const {
  MetricsReport r;
  r.min_points = min_points_;
  r.frames = frames_;

  struct Mean {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v) { sum += v, ++n; }
    double value() const { return n ? sum / double(n) : 0.0; }
  };
  Mean pq, sq, rq, pq_th, sq_th, rq_th, pq_st, sq_st, rq_st, dagger, iou;

  const auto things = classes_.thing_classes();
  std::set<ClassId> evaluated = things;
  for (const auto s : classes_.stuff_classes()) evaluated.insert(s);
  for (const auto cls : evaluated) {
    ClassMetrics m;
    m.id = cls;
    m.name = classes_.name_of(cls);
    m.thing = things.count(cls) != 0;
    if (const auto it = counts_.find(cls); it != counts_.end()) {
      const auto& c = it->second;
      m.tp = c.tp;
      m.fp = c.fp;
      m.fn = c.fn;
      m.iou_sum = c.iou_sum;
      const double denom = double(c.tp) + 0.5 * double(c.fp) + 0.5 * double(c.fn);
      m.evaluated = denom > 0.0;
      if (m.evaluated) {
        m.rq = double(c.tp) / denom;
        m.sq = c.tp ? c.iou_sum / double(c.tp) : 0.0;
        m.pq = c.iou_sum / denom;
      }
      const double uni = double(c.gt_points) + double(c.pred_points) - double(c.intersection);
      m.iou_evaluated = uni > 0.0;
      if (m.iou_evaluated) m.iou = double(c.intersection) / uni;
    }
    if (m.evaluated) {
      pq.add(m.pq);
      sq.add(m.sq);
      rq.add(m.rq);
      (m.thing ? pq_th : pq_st).add(m.pq);
      (m.thing ? sq_th : sq_st).add(m.sq);
      (m.thing ? rq_th : rq_st).add(m.rq);
      dagger.add(m.thing ? m.pq : m.iou);
    }
    if (m.iou_evaluated) iou.add(m.iou);
    r.classes.push_back(std::move(m));
  }
  r.pq = pq.value();
  r.sq = sq.value();
  r.rq = rq.value();
  r.pq_things = pq_th.value();
  r.sq_things = sq_th.value();
  r.rq_things = rq_th.value();
  r.pq_stuff = pq_st.value();
  r.sq_stuff = sq_st.value();
  r.rq_stuff = rq_st.value();
  r.pq_dagger = dagger.value();
  r.miou = iou.value();
  return r;
}

const ClassMetrics* MetricsReport::find(ClassId id) const& {
  for (const auto& c : classes)
    if (c.id == id) return &c;
  return nullptr;
}

std::string MetricsReport::to_table() const {
  std::ostringstream out;
  out << "# frames=" << frames << " min_points=" << min_points << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %5s %6s %6s %6s %6s %7s %7s %7s\n", "class", "kind", "PQ", "SQ", "RQ",
                "IoU", "TP", "FP", "FN");
  out << line;
  for (const auto& c : classes) {
    if (!c.evaluated && !c.iou_evaluated) continue;
    std::snprintf(line, sizeof line, "%-16s %5s %6s %6s %6s %6s %7zu %7zu %7zu\n", c.name.c_str(),
                  c.thing ? "thing" : "stuff", pct(c.pq).c_str(), pct(c.sq).c_str(), pct(c.rq).c_str(),
                  pct(c.iou).c_str(), c.tp, c.fp, c.fn);
    out << line;
  }
  out << "\n";
  std::snprintf(line, sizeof line, "%6s %6s %6s %6s | %6s %6s %6s | %6s %6s %6s | %6s\n", "PQ", "PQ+", "RQ", "SQ",
                "PQth", "RQth", "SQth", "PQst", "RQst", "SQst", "mIoU");
  out << line;
  std::snprintf(line, sizeof line, "%6s %6s %6s %6s | %6s %6s %6s | %6s %6s %6s | %6s\n", pct(pq).c_str(),
                pct(pq_dagger).c_str(), pct(rq).c_str(), pct(sq).c_str(), pct(pq_things).c_str(),
                pct(rq_things).c_str(), pct(sq_things).c_str(), pct(pq_stuff).c_str(), pct(rq_stuff).c_str(),
                pct(sq_stuff).c_str(), pct(miou).c_str());
  out << line;
  return out.str();
}

std::string MetricsReport::to_key_values() const {
  std::ostringstream out;
  out << "frames=" << frames << "\n"
      << "min_points=" << min_points << "\n"
      << "pq=" << pct(pq) << "\n"
      << "pq_dagger=" << pct(pq_dagger) << "\n"
      << "rq=" << pct(rq) << "\n"
      << "sq=" << pct(sq) << "\n"
      << "pq_things=" << pct(pq_things) << "\n"
      << "rq_things=" << pct(rq_things) << "\n"
      << "sq_things=" << pct(sq_things) << "\n"
      << "pq_stuff=" << pct(pq_stuff) << "\n"
      << "rq_stuff=" << pct(rq_stuff) << "\n"
      << "sq_stuff=" << pct(sq_stuff) << "\n"
      << "miou=" << pct(miou) << "\n";
  for (const auto& c : classes) {
    if (c.evaluated) {
      out << "class." << c.name << ".pq=" << pct(c.pq) << "\n"
          << "class." << c.name << ".sq=" << pct(c.sq) << "\n"
          << "class." << c.name << ".rq=" << pct(c.rq) << "\n";
    }
    if (c.iou_evaluated) out << "class." << c.name << ".iou=" << pct(c.iou) << "\n";
  }
  return out.str();
}

MetricsReport panoptic_quality(std::span<const PanopticFrame> gt, std::span<const PanopticFrame> pred,
                               const ClassConfig& classes, std::size_t min_points) {
  if (gt.size() != pred.size()) {
    throw EvaluationError("ground truth has " + std::to_string(gt.size()) + " frames, prediction " +
                          std::to_string(pred.size()));
  }
  PanopticEvaluator eval(classes, min_points);
  for (std::size_t f = 0; f < gt.size(); ++f) eval.add_frame(gt[f], pred[f], std::to_string(f));
  return eval.report();
}

IouResult miou(std::span<const ClassId> gt, std::span<const ClassId> pred, const ClassConfig& classes) {
  if (gt.size() != pred.size()) {
    throw EvaluationError("miou: " + std::to_string(gt.size()) + " ground-truth labels vs " +
                          std::to_string(pred.size()) + " predicted");
  }
  std::map<ClassId, std::array<std::size_t, 3>> c;  // intersection, gt, pred
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto g = canonical_or_throw(classes, gt[i], i, {}, "ground-truth");
    const auto p = canonical_or_throw(classes, pred[i], i, {}, "predicted");
    if (classes.is_ignore(gt[i])) continue;
    ++c[g][1];
    if (classes.is_ignore(pred[i])) continue;
    ++c[p][2];
    if (g == p) ++c[g][0];
  }
  IouResult out;
  double sum = 0.0;
  for (const auto& [cls, v] : c) {
    const double uni = double(v[1]) + double(v[2]) - double(v[0]);
    if (uni <= 0.0) continue;
    out.per_class[cls] = double(v[0]) / uni;
    sum += out.per_class[cls];
  }
  if (!out.per_class.empty()) out.mean = sum / double(out.per_class.size());
  return out;
}

}  // namespace panoclust
