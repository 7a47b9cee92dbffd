#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "htkm/data_matrix.hpp"
#include "htkm/partition.hpp"

namespace htkm {

enum class PenaltyFamily { HardThreshold, Lasso, Ridge, GroupLasso };

PenaltyFamily penalty_family_from_string(const std::string& name);
std::string to_string(PenaltyFamily family);

struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::HardThreshold;
  double lambda = 0.0;
  bool adaptive = false;
  // Group-lasso fixed-point budget.
  int group_max_iter = 100;
  double group_tol = 1e-10;
};

/// Penalty term evaluated on a K x p center matrix:
///   hard-threshold  -> number of nonzero columns
///   lasso           -> sum_j ||mu_.j||_1
///   ridge           -> sum_j ||mu_.j||_2^2
///   group-lasso     -> sum_j ||mu_.j||_2
/// A column counts as nonzero iff some entry differs from 0 exactly; the
/// center updates write literal zeros, so no tolerance is involved.
double penalty_value(const PenaltySpec& spec, const Eigen::MatrixXd& centers);

/// Minimizes the penalized objective over the centers with the assignment
/// held fixed. Starts from the cluster means mu* and applies the family's
/// closed-form rule per column (hard threshold keep-or-zero, lasso soft
/// threshold, ridge proportional shrinkage) or the group-lasso fixed
/// point. With spec.adaptive, lambda is replaced per column by
/// lambda / ||mu*_.j||_2; columns whose mean vector is exactly zero are
/// zeroed directly.
/// Requires every cluster nonempty; throws ContractViolation otherwise.
Eigen::MatrixXd update_centers(const PenaltySpec& spec, const DataMatrix& data,
                               const Partition& part);

/// Indices of columns with at least one exactly nonzero entry, ascending.
std::vector<int> active_columns(const Eigen::MatrixXd& centers);

}  // namespace htkm
