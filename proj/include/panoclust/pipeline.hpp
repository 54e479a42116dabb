#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panoclust/classes.hpp"
#include "panoclust/metrics.hpp"
#include "panoclust/panoptic.hpp"
#include "panoclust/params.hpp"
#include "panoclust/synth.hpp"

namespace panoclust {

inline constexpr const char* kVersion = "0.1.0";

struct ClusterTiming {
  double projection_ms = 0.0;
  double cluster_ms = 0.0;
};

/// Runs one algorithm on a whole cloud. Range-image algorithms project the
/// cloud first; points outside the vertical field of view get label 0.
/// Labels are compacted to 1.. in order of first point.
InstanceLabeling cluster_points(const PointCloud& cloud, const ClusterParams& params,
                                const ProjectionConfig& projection = {}, ClusterTiming* timing = nullptr);

struct PipelineOptions {
  ClusterParams params = SlrParams{};
  ProjectionConfig projection;
  bool per_class = true;
  bool majority_vote = false;

  static PipelineOptions from(const Settings& settings);
};

struct FrameOutput {
  PanopticFrame fused;
  ClusterTiming timing;
  std::size_t thing_points = 0;
  std::size_t instances = 0;
};

/// Clusters the thing points of one frame and fuses the result with its
/// semantic prediction. Stuff and ignore points get instance 0; with the
/// vote off the semantic channel is copied unchanged.
FrameOutput process_frame(const PointCloud& cloud, const std::vector<ClassId>& semantic, const ClassConfig& classes,
                          const PipelineOptions& options);

/// Replaces the class of every instance with its most frequent raw class,
/// ties going to the lower id.
void majority_vote(PanopticFrame& frame);

struct TimingReport {
  std::string algorithm;
  std::vector<double> cluster_ms;  ///< one sample per frame and repetition
  std::vector<double> projection_ms;
  std::vector<std::size_t> points;  ///< thing points clustered, per sample
  std::string hardware;
  bool single_threaded = true;

  double mean() const;
  double median() const;
  double p95() const;
  std::string summary() const;
};

struct BenchConfig {
  /// Dataset input: <root>/sequences/<seq>/{velodyne,predictions,labels}.
  std::optional<std::filesystem::path> dataset_root;
  std::vector<std::string> sequences{"08"};
  /// Synthetic input; the scene's own labels stand in for the semantic
  /// prediction and the ground truth.
  std::vector<SceneSpec> scenes;
  std::vector<std::string> scene_names;

  Settings settings;
  std::filesystem::path class_config;  ///< empty: built-in SemanticKITTI table
  std::optional<std::filesystem::path> output_dir;
  std::size_t max_frames = 0;  ///< 0: every frame

  /// Exactly one input source; settings valid.
  void validate() const;
};

struct FrameIssue {
  std::string frame;
  std::string message;
};

struct PipelineResult {
  MetricsReport metrics;
  bool evaluated = false;  ///< at least one frame had ground truth
  TimingReport timing;
  std::size_t frames = 0;
  std::vector<FrameIssue> skipped;
  std::vector<std::filesystem::path> written;
};

PipelineResult run_pipeline(const BenchConfig& config);

/// Clustering time only, single-threaded, after one untimed warm-up pass.
TimingReport time_algorithm(const BenchConfig& config);

std::string hardware_description();
/// '#'-prefixed lines: version, hardware, every setting.
std::string reproducibility_header(const Settings& settings);

}  // namespace panoclust
