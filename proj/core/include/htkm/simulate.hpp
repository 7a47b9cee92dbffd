#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "htkm/data_matrix.hpp"

namespace htkm {

/// Synthetic Gaussian benchmark configuration. The first 50 variables are
/// informative with block mean patterns determined by K; the remaining
/// p - 50 are standard normal noise.
struct SimConfig {
  int n = 80;
  int p = 50;
  int k = 2;          // 2, 4 or 8 (the supported mean templates)
  double mu = 0.8;    // cluster separation
  std::uint64_t seed = 0;
};

struct LabeledDataset {
  DataMatrix data;
  std::vector<int> labels;  // true cluster per row, values in 1..K
};

/// Mean vector of the informative block for a given true label (1-based).
/// K=2 uses +/-mu on all 50 variables, K=4 sign blocks of 25/25, K=8 sign
/// blocks of 17/17/16.
Eigen::RowVectorXd mean_template(int k_clusters, int label);

/// Draws labels uniformly from {1..K} and samples rows from
/// Normal(template(label), I). Deterministic given cfg.seed; label,
/// informative and noise streams are derived independently so the output
/// is reproducible regardless of generation order.
LabeledDataset simulate_dataset(const SimConfig& cfg);

}  // namespace htkm
