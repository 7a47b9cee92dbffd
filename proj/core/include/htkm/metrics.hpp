#pragma once

#include <Eigen/Dense>
#include <span>

#include "htkm/data_matrix.hpp"
#include "htkm/partition.hpp"
#include "htkm/penalties.hpp"

namespace htkm {

/// Within-cluster sum of squares under a given assignment, normalized by n:
/// (1/n) sum_k sum_{i in C_k} ||x_i - mu_k||^2.
double wcss(const DataMatrix& data, const Eigen::MatrixXd& centers,
            const Partition& part);

/// wcss + lambda * penalty_value.
double penalized_objective(const DataMatrix& data,
                           const Eigen::MatrixXd& centers,
                           const Partition& part, const PenaltySpec& spec);

/// Hubert-Arabie adjusted Rand index between two labelings of the same
/// observations. Arbitrary integer labels; invariant to relabeling;
/// expected value 0 under independent random labelings, 1 iff the
/// partitions coincide up to a permutation of labels.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);
double adjusted_rand_index(const Partition& a, const Partition& b);

/// Euclidean norm of each center column, d_j = ||mu_.j||_2.
Eigen::VectorXd center_column_norms(const Eigen::MatrixXd& centers);

}  // namespace htkm
