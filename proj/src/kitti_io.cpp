#include "panoclust/kitti_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>

#include "panoclust/errors.hpp"

namespace panoclust {
namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path.string());
}

std::uint32_t load_u32(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

void store_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
  out.push_back(static_cast<unsigned char>(v >> 16));
  out.push_back(static_cast<unsigned char>(v >> 24));
}

}  // namespace

PointCloud read_scan(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() % 16 != 0) {
    throw FormatError(path.string() + ": size " + std::to_string(bytes.size()) + " bytes is not a multiple of 16");
  }
  PointCloud cloud;
  cloud.points.resize(bytes.size() / 16);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto* p = bytes.data() + 16 * i;
    cloud.points[i] = {std::bit_cast<float>(load_u32(p)), std::bit_cast<float>(load_u32(p + 4)),
                       std::bit_cast<float>(load_u32(p + 8)), std::bit_cast<float>(load_u32(p + 12))};
  }
  return cloud;
}

void write_scan(const std::filesystem::path& path, const PointCloud& cloud) {
  std::vector<unsigned char> bytes;
  bytes.reserve(cloud.size() * 16);
  for (const auto& p : cloud.points) {
    store_u32(bytes, std::bit_cast<std::uint32_t>(p.x));
    store_u32(bytes, std::bit_cast<std::uint32_t>(p.y));
    store_u32(bytes, std::bit_cast<std::uint32_t>(p.z));
    store_u32(bytes, std::bit_cast<std::uint32_t>(p.remission));
  }
  write_bytes(path, bytes);
}

PanopticFrame read_labels(const std::filesystem::path& path, std::size_t expected_points) {
  const auto bytes = read_bytes(path);
  if (bytes.size() % 4 != 0) {
    throw FormatError(path.string() + ": size " + std::to_string(bytes.size()) + " bytes is not a multiple of 4");
  }
  const auto count = bytes.size() / 4;
  if (count != expected_points) {
    throw FormatError(path.string() + ": " + std::to_string(count) + " labels for " +
                      std::to_string(expected_points) + " points");
  }
  PanopticFrame frame;
  frame.classes.resize(count);
  frame.instances.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const LabelWord w{load_u32(bytes.data() + 4 * i)};
    frame.classes[i] = w.semantic();
    frame.instances[i] = w.instance();
  }
  return frame;
}

void write_labels(const std::filesystem::path& path, const PanopticFrame& frame, const ClassConfig* classes) {
  if (frame.instances.size() != frame.classes.size()) {
    throw FormatError("write_labels: " + std::to_string(frame.classes.size()) + " classes but " +
                      std::to_string(frame.instances.size()) + " instances");
  }
  std::vector<unsigned char> bytes;
  bytes.reserve(frame.size() * 4);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    Label inst = frame.instances[i];
    if (classes && !classes->is_thing(frame.classes[i])) inst = 0;
    if (inst > 0xFFFFu) {
      throw FormatError("write_labels: instance id " + std::to_string(inst) + " at point " + std::to_string(i) +
                        " does not fit in 16 bits");
    }
    store_u32(bytes, LabelWord::encode(frame.classes[i], static_cast<std::uint16_t>(inst)).value);
  }
  write_bytes(path, bytes);
}

std::string DatasetLayout::sequence_name(int sequence) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", sequence);
  return buf;
}

std::string DatasetLayout::frame_name(std::size_t frame) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", frame);
  return buf;
}

std::filesystem::path DatasetLayout::sequence_dir(const std::string& sequence) const {
  return root / "sequences" / sequence;
}

std::filesystem::path DatasetLayout::scan_path(const std::string& sequence, const std::string& frame) const {
  return sequence_dir(sequence) / "velodyne" / (frame + ".bin");
}

std::filesystem::path DatasetLayout::label_path(const std::string& sequence, const std::string& frame) const {
  return sequence_dir(sequence) / "labels" / (frame + ".label");
}

std::filesystem::path DatasetLayout::prediction_path(const std::string& sequence, const std::string& frame) const {
  return sequence_dir(sequence) / "predictions" / (frame + ".label");
}

std::vector<std::string> DatasetLayout::frames(const std::string& sequence) const {
  std::vector<std::string> out;
  const auto dir = sequence_dir(sequence) / "velodyne";
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".bin") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace panoclust
