#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "panoclust/classes.hpp"
#include "panoclust/cloud.hpp"
#include "panoclust/panoptic.hpp"

namespace panoclust {

/// Label word: lower 16 bits semantic class, upper 16 bits instance id.
struct LabelWord {
  std::uint32_t value = 0;

  static LabelWord encode(ClassId cls, std::uint16_t instance) {
    return {static_cast<std::uint32_t>(cls) | (static_cast<std::uint32_t>(instance) << 16)};
  }
  ClassId semantic() const { return static_cast<ClassId>(value & 0xFFFFu); }
  std::uint16_t instance() const { return static_cast<std::uint16_t>(value >> 16); }
};

/// Little-endian float32 quadruples (x, y, z, remission).
PointCloud read_scan(const std::filesystem::path& path);
void write_scan(const std::filesystem::path& path, const PointCloud& cloud);

/// Reads little-endian label words; the count must equal expected_points.
PanopticFrame read_labels(const std::filesystem::path& path, std::size_t expected_points);

/// Writes one word per point. With a class config, stuff points are written
/// with instance 0. Instance ids above 0xFFFF are a format error.
void write_labels(const std::filesystem::path& path, const PanopticFrame& frame,
                  const ClassConfig* classes = nullptr);

/// sequences/<seq>/{velodyne,labels,predictions}/<frame>.{bin,label}
struct DatasetLayout {
  std::filesystem::path root;

  static std::string sequence_name(int sequence);  ///< zero-padded, "08"
  static std::string frame_name(std::size_t frame);  ///< zero-padded, "000042"

  std::filesystem::path sequence_dir(const std::string& sequence) const;
  std::filesystem::path scan_path(const std::string& sequence, const std::string& frame) const;
  std::filesystem::path label_path(const std::string& sequence, const std::string& frame) const;
  std::filesystem::path prediction_path(const std::string& sequence, const std::string& frame) const;
  /// Frame names (without extension) of the sequence's scans, sorted.
  std::vector<std::string> frames(const std::string& sequence) const;
};

}  // namespace panoclust
