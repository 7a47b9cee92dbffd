#include "htkm/penalties.hpp"

#include <cmath>

#include "htkm/solver.hpp"

namespace htkm {

PenaltyFamily penalty_family_from_string(const std::string& name) {
  if (name == "ht" || name == "hard-threshold" || name == "l0") {
    return PenaltyFamily::HardThreshold;
  }
  if (name == "lasso") return PenaltyFamily::Lasso;
  if (name == "ridge") return PenaltyFamily::Ridge;
  if (name == "glasso" || name == "group-lasso") return PenaltyFamily::GroupLasso;
  throw ConfigError("unknown penalty family: " + name);
}

std::string to_string(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::HardThreshold:
      return "ht";
    case PenaltyFamily::Lasso:
      return "lasso";
    case PenaltyFamily::Ridge:
      return "ridge";
    case PenaltyFamily::GroupLasso:
      return "glasso";
  }
  return "?";
}

std::vector<int> active_columns(const Eigen::MatrixXd& centers) {
  std::vector<int> active;
  for (int j = 0; j < centers.cols(); ++j) {
    bool nonzero = false;
    for (int k = 0; k < centers.rows(); ++k) {
      if (centers(k, j) != 0.0) {
        nonzero = true;
        break;
      }
    }
    if (nonzero) active.push_back(j);
  }
  return active;
}

double penalty_value(const PenaltySpec& spec, const Eigen::MatrixXd& centers) {
  double total = 0.0;
  switch (spec.family) {
    case PenaltyFamily::HardThreshold:
      total = static_cast<double>(active_columns(centers).size());
      break;
    case PenaltyFamily::Lasso:
      total = centers.cwiseAbs().sum();
      break;
    case PenaltyFamily::Ridge:
      total = centers.squaredNorm();
      break;
    case PenaltyFamily::GroupLasso:
      total = centers.colwise().norm().sum();
      break;
  }
  return total;
}

namespace {

// Per-column group-lasso subproblem with the assignment fixed:
//   minimize (1/n) sum_k w_k (v_k - a_k)^2 + lambda ||v||_2.
// The stationary point satisfies v_k = a_k / (1 + n*lambda / (2 w_k ||v||)),
// found by the fixed-point iteration on the column norm and polished by
// bisection on the norm equation. Falls back to the zero column whenever
// the iteration collapses or the zero column scores no worse.
Eigen::VectorXd group_lasso_column(const Eigen::VectorXd& a,
                                   const std::vector<int>& sizes, double n,
                                   double lambda, int max_iter, double tol) {
  const int k = static_cast<int>(a.size());
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(k);
  const double a_norm = a.norm();
  if (a_norm == 0.0 || lambda <= 0.0) return lambda <= 0.0 ? a : zero;

  const double nl = n * lambda;
  auto value_at = [&](double s) {
    // Column vector implied by norm s, and the norm it maps to.
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
      const double w2 = 2.0 * sizes[i];
      const double v = a(i) * w2 * s / (w2 * s + nl);
      sum += v * v;
    }
    return std::sqrt(sum);
  };

  double s = a_norm;
  bool collapsed = false;
  for (int it = 0; it < max_iter; ++it) {
    const double next = value_at(s);
    const double change = std::abs(next - s);
    s = next;
    if (s < 1e-10) {
      collapsed = true;
      break;
    }
    if (change < tol) break;
  }
  if (!collapsed && s > 0.0) {
    // value_at(s) - s has a unique positive root when one exists; bracket
    // and bisect to machine precision.
    double lo = s, hi = s;
    while (value_at(lo) < lo && lo > 1e-300) lo *= 0.5;
    while (value_at(hi) > hi) hi *= 2.0;
    if (lo <= 1e-300) {
      collapsed = true;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (value_at(mid) >= mid ? lo : hi) = mid;
      }
      s = 0.5 * (lo + hi);
    }
  }
  if (collapsed) return zero;

  Eigen::VectorXd v(k);
  for (int i = 0; i < k; ++i) {
    const double w2 = 2.0 * sizes[i];
    v(i) = a(i) * w2 * s / (w2 * s + nl);
  }
  // Keep whichever of {v, 0} has the lower column objective.
  double obj_v = lambda * v.norm();
  double obj_zero = 0.0;
  for (int i = 0; i < k; ++i) {
    obj_v += sizes[i] * (v(i) - a(i)) * (v(i) - a(i)) / n;
    obj_zero += sizes[i] * a(i) * a(i) / n;
  }
  return obj_v <= obj_zero ? v : zero;
}

}  // namespace

Eigen::MatrixXd update_centers(const PenaltySpec& spec, const DataMatrix& data,
                               const Partition& part) {
  if (spec.lambda < 0.0)
    throw ConfigError("update_centers: lambda must be >= 0");
  const Eigen::MatrixXd means = cluster_means(data, part);
  const std::vector<int> sizes = cluster_counts(part);
  const double n = static_cast<double>(data.n());
  const int k = part.k;
  const int p = data.p();

  Eigen::MatrixXd centers = means;
  if (spec.lambda == 0.0) return centers;

  for (int j = 0; j < p; ++j) {
    const Eigen::VectorXd col = means.col(j);
    double lambda = spec.lambda;
    if (spec.adaptive) {
      const double norm = col.norm();
      if (norm == 0.0) {
        centers.col(j).setZero();
        continue;
      }
      lambda /= norm;
    }
    switch (spec.family) {
      case PenaltyFamily::HardThreshold: {
        // Keep the column iff ||X_j||^2 > ||X_j - M mu*_j||^2 + n*lambda,
        // which reduces to sum_k |C_k| mu*_kj^2 > n*lambda.
        double between = 0.0;
        for (int c = 0; c < k; ++c) between += sizes[c] * col(c) * col(c);
        if (!(between > n * lambda)) centers.col(j).setZero();
        break;
      }
      case PenaltyFamily::Lasso: {
        for (int c = 0; c < k; ++c) {
          const double a = col(c);
          if (a == 0.0) {
            centers(c, j) = 0.0;
            continue;
          }
          const double factor =
              std::max(0.0, 1.0 - n * lambda / (2.0 * sizes[c] * std::abs(a)));
          centers(c, j) = factor * a;
        }
        break;
      }
      case PenaltyFamily::Ridge: {
        for (int c = 0; c < k; ++c) {
          centers(c, j) = col(c) / (1.0 + n * lambda / sizes[c]);
        }
        break;
      }
      case PenaltyFamily::GroupLasso: {
        centers.col(j) = group_lasso_column(col, sizes, n, lambda,
                                            spec.group_max_iter, spec.group_tol);
        break;
      }
    }
  }
  return centers;
}

}  // namespace htkm
