#pragma once

#include <vector>

#include "htkm/error.hpp"

namespace htkm {

/// Cluster membership for n observations. Labels are 0-based internally;
/// file formats use 1..K.
struct Partition {
  std::vector<int> labels;
  int k = 0;

  int n() const { return static_cast<int>(labels.size()); }

  bool operator==(const Partition& other) const = default;
};

inline void validate_partition(const Partition& part) {
  if (part.k < 1) throw ConfigError("partition: k must be >= 1");
  for (int lab : part.labels) {
    if (lab < 0 || lab >= part.k)
      throw ConfigError("partition: label out of range");
  }
}

inline std::vector<int> cluster_counts(const Partition& part) {
  std::vector<int> counts(part.k, 0);
  for (int lab : part.labels) ++counts[lab];
  return counts;
}

}  // namespace htkm
