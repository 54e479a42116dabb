#pragma once

#include <cstddef>
#include <vector>

#include "panoclust/cloud.hpp"

namespace panoclust {

/// Per-point (class, instance). Stuff points carry instance 0.
struct PanopticFrame {
  std::vector<ClassId> classes;
  std::vector<Label> instances;

  std::size_t size() const { return classes.size(); }
};

}  // namespace panoclust
