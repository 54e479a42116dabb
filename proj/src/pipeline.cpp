#include "panoclust/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "panoclust/depth.hpp"
#include "panoclust/errors.hpp"
#include "panoclust/euclidean.hpp"
#include "panoclust/kitti_io.hpp"
#include "panoclust/slr.hpp"
#include "panoclust/supervoxel.hpp"

namespace panoclust {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Relabels to 1.. in order of first appearance; 0 stays 0.
std::size_t compact(InstanceLabeling& labels) {
  std::unordered_map<Label, Label> remap;
  for (auto& l : labels) {
    if (l == 0) continue;
    const auto [it, fresh] = remap.try_emplace(l, static_cast<Label>(remap.size() + 1));
    l = it->second;
  }
  return remap.size();
}

struct FrameData {
  PointCloud cloud;
  std::vector<ClassId> semantic;
  std::optional<PanopticFrame> truth;
};

struct FrameJob {
  std::string id;
  std::function<FrameData()> load;
  std::optional<std::filesystem::path> output;
};

std::vector<FrameJob> collect_jobs(const BenchConfig& config) {
  std::vector<FrameJob> jobs;
  const auto out_path = [&](const std::string& seq, const std::string& frame) -> std::optional<std::filesystem::path> {
    if (!config.output_dir) return std::nullopt;
    return DatasetLayout{*config.output_dir}.prediction_path(seq, frame);
  };

  if (config.dataset_root) {
    const DatasetLayout layout{*config.dataset_root};
    for (const auto& seq : config.sequences) {
      for (const auto& frame : layout.frames(seq)) {
        if (config.max_frames && jobs.size() >= config.max_frames) return jobs;
        jobs.push_back(FrameJob{
            seq + "/" + frame,
            [layout, seq, frame] {
              FrameData d;
              d.cloud = read_scan(layout.scan_path(seq, frame));
              const auto pred_path = layout.prediction_path(seq, frame);
              if (!std::filesystem::exists(pred_path)) {
                throw FormatError("missing prediction file " + pred_path.string());
              }
              d.semantic = read_labels(pred_path, d.cloud.size()).classes;
              const auto gt_path = layout.label_path(seq, frame);
              if (std::filesystem::exists(gt_path)) d.truth = read_labels(gt_path, d.cloud.size());
              return d;
            },
            out_path(seq, frame)});
      }
    }
    return jobs;
  }

  for (std::size_t i = 0; i < config.scenes.size(); ++i) {
    if (config.max_frames && jobs.size() >= config.max_frames) break;
    const std::string name = i < config.scene_names.size() ? config.scene_names[i] : "synthetic";
    const std::string frame = DatasetLayout::frame_name(i);
    const SceneSpec spec = config.scenes[i];
    jobs.push_back(FrameJob{name + "/" + frame,
                            [spec] {
                              auto synthetic = generate(spec);
                              FrameData d;
                              d.cloud = std::move(synthetic.cloud);
                              d.semantic = synthetic.truth.classes;
                              d.truth = std::move(synthetic.truth);
                              return d;
                            },
                            out_path(name, frame)});
  }
  return jobs;
}

ClassConfig class_config_of(const BenchConfig& config) {
  return config.class_config.empty() ? default_class_config() : load_class_config(config.class_config);
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - double(lo)) * (v[hi] - v[lo]);
}

}  // namespace

InstanceLabeling cluster_points(const PointCloud& cloud, const ClusterParams& params,
                                const ProjectionConfig& projection, ClusterTiming* timing) {
  validate(params);
  ClusterTiming t;
  InstanceLabeling labels;
  if (cloud.empty()) {
    if (timing) *timing = t;
    return labels;
  }

  const auto on_image = [&](auto&& run) {
    auto start = Clock::now();
    const RangeImage image = project(cloud, projection);
    t.projection_ms = ms_since(start);
    start = Clock::now();
    const LabelGrid grid = run(image);
    t.cluster_ms = ms_since(start);
    return unproject(grid, image);
  };

  if (const auto* p = std::get_if<EuclideanParams>(&params)) {
    const auto start = Clock::now();
    labels = euclidean_cluster(cloud, *p);
    t.cluster_ms = ms_since(start);
  } else if (const auto* p = std::get_if<SupervoxelParams>(&params)) {
    const auto start = Clock::now();
    labels = supervoxel_cluster(cloud, *p);
    t.cluster_ms = ms_since(start);
  } else if (const auto* p = std::get_if<DepthParams>(&params)) {
    labels = on_image([&](const RangeImage& image) { return depth_cluster(image, *p); });
  } else {
    const auto& slr = std::get<SlrParams>(params);
    labels = on_image([&](const RangeImage& image) { return slr_cluster(image, slr); });
  }
  compact(labels);
  if (timing) *timing = t;
  return labels;
}

PipelineOptions PipelineOptions::from(const Settings& settings) {
  settings.validate();
  return PipelineOptions{settings.cluster_params(), settings.projection, settings.per_class, settings.majority_vote};
}

FrameOutput process_frame(const PointCloud& cloud, const std::vector<ClassId>& semantic, const ClassConfig& classes,
                          const PipelineOptions& options) {
  if (semantic.size() != cloud.size()) {
    throw ParameterError("semantic prediction has " + std::to_string(semantic.size()) + " labels for " +
                         std::to_string(cloud.size()) + " points");
  }
  FrameOutput out;
  out.fused.classes = semantic;
  out.fused.instances.assign(cloud.size(), 0);

  // Thing points grouped by evaluated class, or all together.
  std::map<ClassId, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!classes.is_thing(semantic[i])) continue;
    const ClassId key = options.per_class ? *classes.canonical(semantic[i]) : ClassId{0};
    groups[key].push_back(i);
    ++out.thing_points;
  }

  Label offset = 0;
  for (const auto& [cls, members] : groups) {
    ClusterTiming t;
    const auto labels = cluster_points(cloud.subset(members), options.params, options.projection, &t);
    out.timing.projection_ms += t.projection_ms;
    out.timing.cluster_ms += t.cluster_ms;
    Label highest = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (labels[k] == 0) continue;
      out.fused.instances[members[k]] = labels[k] + offset;
      highest = std::max(highest, labels[k]);
    }
    offset += highest;
  }
  out.instances = offset;

  if (options.majority_vote) majority_vote(out.fused);
  return out;
}

void majority_vote(PanopticFrame& frame) {
  std::unordered_map<Label, std::map<ClassId, std::size_t>> votes;
  for (std::size_t i = 0; i < frame.size(); ++i)
    if (frame.instances[i] != 0) ++votes[frame.instances[i]][frame.classes[i]];
  std::unordered_map<Label, ClassId> winner;
  for (const auto& [inst, tally] : votes) {
    auto best = tally.begin();
    for (auto it = tally.begin(); it != tally.end(); ++it)
      if (it->second > best->second) best = it;
    winner[inst] = best->first;
  }
  for (std::size_t i = 0; i < frame.size(); ++i)
    if (frame.instances[i] != 0) frame.classes[i] = winner[frame.instances[i]];
}

double TimingReport::mean() const {
  if (cluster_ms.empty()) return 0.0;
  return std::accumulate(cluster_ms.begin(), cluster_ms.end(), 0.0) / double(cluster_ms.size());
}
double TimingReport::median() const { return percentile(cluster_ms, 0.5); }
double TimingReport::p95() const { return percentile(cluster_ms, 0.95); }

std::string TimingReport::summary() const {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  const double pts = points.empty() ? 0.0
                                    : double(std::accumulate(points.begin(), points.end(), std::size_t{0})) /
                                          double(points.size());
  double proj = 0.0;
  for (const auto v : projection_ms) proj += v;
  if (!projection_ms.empty()) proj /= double(projection_ms.size());
  out << "algorithm=" << algorithm << "\n"
      << "samples=" << cluster_ms.size() << "\n"
      << "cluster_ms_mean=" << mean() << "\n"
      << "cluster_ms_median=" << median() << "\n"
      << "cluster_ms_p95=" << p95() << "\n"
      << "projection_ms_mean=" << proj << "\n"
      << "points_mean=" << pts << "\n"
      << "single_threaded=" << (single_threaded ? "true" : "false") << "\n"
      << "hardware=" << hardware << "\n";
  return out.str();
}

void BenchConfig::validate() const {
  const bool dataset = dataset_root.has_value();
  const bool synthetic = !scenes.empty();
  if (dataset == synthetic) throw ConfigError("exactly one input source is required: a dataset root or scene specs");
  if (dataset && sequences.empty()) throw ConfigError("no sequences selected");
  settings.validate();
}

PipelineResult run_pipeline(const BenchConfig& config) {
  config.validate();
  const ClassConfig classes = class_config_of(config);
  const auto options = PipelineOptions::from(config.settings);
  const auto jobs = collect_jobs(config);

  struct Slot {
    bool done = false;
    bool has_truth = false;
    FrameOutput output;
    std::optional<FrameIssue> issue;
  };
  std::vector<Slot> slots(jobs.size());
  const int workers = std::max(1, std::min<int>(config.settings.workers, int(std::max<std::size_t>(jobs.size(), 1))));
  std::vector<PanopticEvaluator> evaluators(workers, PanopticEvaluator(classes, config.settings.min_points));
  std::atomic<std::size_t> next{0};

  const auto work = [&](int w) {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      auto& slot = slots[j];
      try {
        auto data = jobs[j].load();
        slot.output = process_frame(data.cloud, data.semantic, classes, options);
        if (jobs[j].output) write_labels(*jobs[j].output, slot.output.fused, &classes);
        if (data.truth) {
          evaluators[w].add_frame(*data.truth, slot.output.fused, jobs[j].id);
          slot.has_truth = true;
        }
        slot.done = true;
      } catch (const Error& e) {
        slot.issue = FrameIssue{jobs[j].id, e.what()};
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  PipelineResult result;
  for (int w = 1; w < workers; ++w) evaluators[0].merge(evaluators[w]);
  result.metrics = evaluators[0].report();
  result.timing.algorithm = std::string(to_string(config.settings.algorithm));
  result.timing.hardware = hardware_description();
  result.timing.single_threaded = workers == 1;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& slot = slots[j];
    if (slot.issue) result.skipped.push_back(*slot.issue);
    if (!slot.done) continue;
    ++result.frames;
    result.evaluated = result.evaluated || slot.has_truth;
    result.timing.cluster_ms.push_back(slot.output.timing.cluster_ms);
    result.timing.projection_ms.push_back(slot.output.timing.projection_ms);
    result.timing.points.push_back(slot.output.thing_points);
    if (jobs[j].output) result.written.push_back(*jobs[j].output);
  }
  return result;
}

TimingReport time_algorithm(const BenchConfig& config) {
  config.validate();
  const ClassConfig classes = class_config_of(config);
  const auto options = PipelineOptions::from(config.settings);
  TimingReport report;
  report.algorithm = std::string(to_string(config.settings.algorithm));
  report.hardware = hardware_description();

  for (const auto& job : collect_jobs(config)) {
    FrameData data;
    try {
      data = job.load();
    } catch (const Error&) {
      continue;
    }
    process_frame(data.cloud, data.semantic, classes, options);
    for (int r = 0; r < config.settings.repetitions; ++r) {
      const auto out = process_frame(data.cloud, data.semantic, classes, options);
      report.cluster_ms.push_back(out.timing.cluster_ms);
      report.projection_ms.push_back(out.timing.projection_ms);
      report.points.push_back(out.thing_points);
    }
  }
  return report;
}

std::string hardware_description() {
  std::string model = "unknown cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  for (std::string line; std::getline(cpuinfo, line);) {
    if (line.rfind("model name", 0) == 0) {
      if (const auto colon = line.find(':'); colon != std::string::npos) {
        model = line.substr(colon + 1);
        model.erase(0, model.find_first_not_of(' '));
      }
      break;
    }
  }
  return model + ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
}

std::string reproducibility_header(const Settings& settings) {
  std::ostringstream out;
  out << "# panoclust " << kVersion << "\n";
  out << "# hardware: " << hardware_description() << "\n";
  for (const auto& [key, value] : describe(settings)) out << "# " << key << " = " << value << "\n";
  return out.str();
}

}  // namespace panoclust
