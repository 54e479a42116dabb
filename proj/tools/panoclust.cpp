// panoclust: cluster, evaluate, time and synthesize SemanticKITTI-style frames.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "panoclust/classes.hpp"
#include "panoclust/errors.hpp"
#include "panoclust/kitti_io.hpp"
#include "panoclust/metrics.hpp"
#include "panoclust/params.hpp"
#include "panoclust/pipeline.hpp"
#include "panoclust/synth.hpp"

namespace fs = std::filesystem;
using namespace panoclust;

namespace {

struct Common {
  std::string config_file;
  std::string class_file;
  std::map<std::string, std::string> overrides;
};

// Every settings key becomes a --<key> flag on the subcommand.
void add_setting_flags(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_file, "settings file (key = value lines)")->check(CLI::ExistingFile);
  cmd->add_option("--classes", common.class_file, "class table (default: built-in SemanticKITTI)")
      ->check(CLI::ExistingFile);
  for (const auto& key : setting_keys()) {
    cmd->add_option_function<std::string>(
           "--" + key, [&common, key](const std::string& v) { common.overrides[key] = v; }, setting_help(key))
        ->group("Settings");
  }
}

Settings resolve(const Common& common) {
  Settings s;
  if (!common.config_file.empty()) s = load_settings(common.config_file, s);
  s = settings_from_map(common.overrides, s);
  s.validate();
  return s;
}

ClassConfig classes_of(const Common& common) {
  return common.class_file.empty() ? default_class_config() : load_class_config(common.class_file);
}

std::size_t label_count(const fs::path& path) { return static_cast<std::size_t>(fs::file_size(path) / 4); }

void print_issues(const std::vector<FrameIssue>& issues) {
  for (const auto& i : issues) std::cerr << "skipped " << i.frame << ": " << i.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering-based LiDAR panoptic segmentation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // cluster
  Common cluster_common;
  std::string scan_file, pred_file, out_file, dataset, out_dir;
  std::vector<std::string> sequences{"08"};
  auto* cluster = app.add_subcommand("cluster", "cluster thing points of one frame or whole sequences");
  add_setting_flags(cluster, cluster_common);
  cluster->add_option("--scan", scan_file, "velodyne .bin scan");
  cluster->add_option("--prediction", pred_file, "semantic prediction .label file");
  cluster->add_option("--output", out_file, "fused panoptic .label output");
  cluster->add_option("--dataset", dataset, "dataset root with sequences/<seq>/...");
  cluster->add_option("--sequence", sequences, "sequences to process")->expected(1, -1);
  cluster->add_option("--out", out_dir, "output root; predictions go to sequences/<seq>/predictions");

  // evaluate
  Common eval_common;
  std::string gt_file, eval_pred_file, eval_dataset, eval_pred_root;
  std::vector<std::string> eval_sequences{"08"};
  auto* evaluate = app.add_subcommand("evaluate", "compare panoptic predictions against ground truth");
  add_setting_flags(evaluate, eval_common);
  evaluate->add_option("--gt", gt_file, "ground-truth .label file");
  evaluate->add_option("--pred", eval_pred_file, "predicted .label file");
  evaluate->add_option("--dataset", eval_dataset, "dataset root holding the ground truth");
  evaluate->add_option("--predictions", eval_pred_root, "root holding sequences/<seq>/predictions (default: --dataset)");
  evaluate->add_option("--sequence", eval_sequences, "sequences to evaluate")->expected(1, -1);

  // bench
  Common bench_common;
  std::string bench_dataset, bench_out;
  std::vector<std::string> bench_sequences{"08"}, scene_files;
  std::size_t max_frames = 0;
  bool timing_only = false;
  auto* bench = app.add_subcommand("bench", "full pipeline with evaluation and timing");
  add_setting_flags(bench, bench_common);
  bench->add_option("--dataset", bench_dataset, "dataset root");
  bench->add_option("--sequence", bench_sequences, "sequences")->expected(1, -1);
  bench->add_option("--scene", scene_files, "synthetic scene files")->check(CLI::ExistingFile)->expected(1, -1);
  bench->add_option("--out", bench_out, "write fused predictions under this root");
  bench->add_option("--max-frames", max_frames, "stop after this many frames (0: all)");
  bench->add_flag("--timing-only", timing_only, "single-threaded clustering timing, no evaluation");

  // synth
  std::string synth_scene, synth_out, synth_preset = "two_boxes", synth_sequence = "00";
  std::size_t synth_frames = 1;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "render synthetic scenes into a dataset tree");
  synth->add_option("--scene", synth_scene, "scene file")->check(CLI::ExistingFile);
  synth->add_option("--preset", synth_preset, "built-in scene when no file is given")
      ->check(CLI::IsMember({"two_boxes", "single_box"}));
  synth->add_option("--out", synth_out, "dataset root to write")->required();
  synth->add_option("--sequence", synth_sequence, "sequence name");
  synth->add_option("--frames", synth_frames, "frames, each with its own noise seed");
  synth->add_option("--seed", synth_seed, "seed of the first frame");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) {
      const auto settings = resolve(cluster_common);
      const auto classes = classes_of(cluster_common);
      std::cout << reproducibility_header(settings);
      if (!scan_file.empty()) {
        if (pred_file.empty() || out_file.empty()) throw ConfigError("--scan needs --prediction and --output");
        const auto cloud = read_scan(scan_file);
        const auto semantic = read_labels(pred_file, cloud.size()).classes;
        const auto out = process_frame(cloud, semantic, classes, PipelineOptions::from(settings));
        write_labels(out_file, out.fused, &classes);
        std::printf("points=%zu thing_points=%zu instances=%zu cluster_ms=%.3f\n", cloud.size(), out.thing_points,
                    out.instances, out.timing.cluster_ms);
        return 0;
      }
      if (dataset.empty()) throw ConfigError("give either --scan or --dataset");
      if (out_dir.empty()) throw ConfigError("--dataset needs --out");
      BenchConfig cfg;
      cfg.dataset_root = dataset;
      cfg.sequences = sequences;
      cfg.settings = settings;
      cfg.class_config = cluster_common.class_file;
      cfg.output_dir = fs::path(out_dir);
      const auto result = run_pipeline(cfg);
      print_issues(result.skipped);
      std::printf("frames=%zu written=%zu skipped=%zu\n", result.frames, result.written.size(), result.skipped.size());
      return result.skipped.empty() ? 0 : 2;
    }

    if (evaluate->parsed()) {
      const auto settings = resolve(eval_common);
      PanopticEvaluator evaluator(classes_of(eval_common), settings.min_points);
      std::cout << reproducibility_header(settings);
      std::vector<FrameIssue> issues;
      if (!gt_file.empty()) {
        if (eval_pred_file.empty()) throw ConfigError("--gt needs --pred");
        const auto n = label_count(gt_file);
        evaluator.add_frame(read_labels(gt_file, n), read_labels(eval_pred_file, n), gt_file);
      } else {
        if (eval_dataset.empty()) throw ConfigError("give either --gt/--pred or --dataset");
        const DatasetLayout gt_layout{eval_dataset};
        const DatasetLayout pred_layout{eval_pred_root.empty() ? eval_dataset : eval_pred_root};
        for (const auto& seq : eval_sequences) {
          for (const auto& frame : gt_layout.frames(seq)) {
            const auto gt_path = gt_layout.label_path(seq, frame);
            const auto pred_path = pred_layout.prediction_path(seq, frame);
            try {
              if (!fs::exists(pred_path)) throw FormatError("missing prediction file " + pred_path.string());
              const auto n = label_count(gt_path);
              evaluator.add_frame(read_labels(gt_path, n), read_labels(pred_path, n), seq + "/" + frame);
            } catch (const Error& e) {
              issues.push_back({seq + "/" + frame, e.what()});
            }
          }
        }
      }
      print_issues(issues);
      const auto report = evaluator.report();
      std::cout << report.to_table() << report.to_key_values();
      return issues.empty() ? 0 : 2;
    }

    if (bench->parsed()) {
      BenchConfig cfg;
      cfg.settings = resolve(bench_common);
      cfg.class_config = bench_common.class_file;
      cfg.max_frames = max_frames;
      if (!bench_dataset.empty()) {
        cfg.dataset_root = bench_dataset;
        cfg.sequences = bench_sequences;
      }
      for (const auto& f : scene_files) {
        cfg.scenes.push_back(load_scene(f));
        cfg.scene_names.push_back(fs::path(f).stem().string());
      }
      if (!bench_out.empty()) cfg.output_dir = bench_out;
      std::cout << reproducibility_header(cfg.settings);
      if (timing_only) {
        std::cout << time_algorithm(cfg).summary();
        return 0;
      }
      const auto result = run_pipeline(cfg);
      print_issues(result.skipped);
      if (result.evaluated) std::cout << result.metrics.to_table() << result.metrics.to_key_values();
      std::cout << result.timing.summary();
      return result.skipped.empty() ? 0 : 2;
    }

    if (synth->parsed()) {
      SceneSpec spec = !synth_scene.empty()          ? load_scene(synth_scene)
                       : synth_preset == "single_box" ? single_box_scene()
                                                      : two_box_scene();
      const DatasetLayout layout{synth_out};
      const auto classes = default_class_config();
      for (std::size_t i = 0; i < synth_frames; ++i) {
        spec.seed = synth_seed + i;
        const auto frame = generate(spec);
        const auto name = DatasetLayout::frame_name(i);
        write_scan(layout.scan_path(synth_sequence, name), frame.cloud);
        write_labels(layout.label_path(synth_sequence, name), frame.truth, &classes);
        PanopticFrame semantic_only{frame.truth.classes, std::vector<Label>(frame.truth.size(), 0)};
        write_labels(layout.prediction_path(synth_sequence, name), semantic_only);
        std::printf("%s/%s points=%zu\n", synth_sequence.c_str(), name.c_str(), frame.cloud.size());
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
