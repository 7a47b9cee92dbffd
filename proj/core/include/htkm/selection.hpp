#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "htkm/data_matrix.hpp"
#include "htkm/solver.hpp"

namespace htkm {

enum class SelectionMethod { Aic, Bic, Gap1, Gap2, Stab1, Stab2, Stab3 };
enum class StabScheme { Stab1, Stab2, Stab3 };
enum class GapVariant { Gap1, Gap2 };

SelectionMethod selection_method_from_string(const std::string& name);
std::string to_string(SelectionMethod method);

/// One transition between consecutive distinct active sets along the
/// descending-lambda path.
struct GapStep {
  double lambda = 0.0;             // largest grid lambda attaining to_set
  std::vector<int> from_set;       // 0-based
  std::vector<int> to_set;
  std::vector<int> entering;
  std::vector<int> dropped;
  double delta = 0.0;              // observed WCSS increase, per entering variable
  std::vector<double> delta_star;  // permutation references, same scale
  double m = 0.0;                  // mean of delta_star
  double s = 0.0;                  // sample sd of delta_star
  double d = 0.0;                  // (m - delta) / s
  bool valid = false;              // false when s == 0
};

struct StabilityPoint {
  double lambda = 0.0;
  double instability = 0.0;
  int used_replications = 0;  // replications with a usable validation set
  bool degenerate = false;    // some replication predicted < 2 clusters
};

struct SelectionReport {
  SelectionMethod method = SelectionMethod::Aic;
  std::vector<double> grid;
  std::vector<double> scores;  // aligned with grid; NaN where undefined
  double chosen_lambda = 0.0;
  FitResult chosen_fit;
  // Method-specific diagnostics (empty for the methods that do not use them).
  std::vector<GapStep> gap_steps;
  std::vector<StabilityPoint> stability;
  std::vector<double> wcss_all;      // AIC/BIC: raw (times n) all-variable WCSS
  std::vector<int> active_counts;   // AIC/BIC: q(lambda)
};

/// score(lambda) = n * wcss_all(lambda) + 2 K q(lambda), where wcss_all is
/// the WCSS over all p variables under that lambda's fit (inactive columns
/// sit at center 0) and q is the active-set size. Minimizing lambda wins;
/// ties go to the larger lambda.
SelectionReport aic(const PathResult& path, const DataMatrix& data);

/// As aic with penalty K * ln(n) * q(lambda).
SelectionReport bic(const PathResult& path, const DataMatrix& data);

/// Pair-disagreement distance between two clusterings of the same points:
/// the fraction of unordered pairs co-clustered by exactly one of the two.
/// Zero iff the partitions agree up to relabeling.
double clustering_distance(const Partition& a, const Partition& b);

struct InstabilityResult {
  double value = 0.0;
  int used_replications = 0;
  bool degenerate = false;
};

/// Bootstrap estimate of clustering instability at one lambda. Each
/// replication draws two bootstrap samples, fits both, classifies a
/// validation set (scheme-dependent: stab1 the original data, stab2 the
/// intersection of unique bootstrap indices, stab3 a third bootstrap) by
/// nearest fitted center over each fit's active variables, and records the
/// clustering distance. Replications whose validation set has fewer than 2
/// points are skipped; all skipped is an error.
InstabilityResult instability(const DataMatrix& data, int k,
                              const PenaltySpec& spec, StabScheme scheme,
                              int B = 20, std::uint64_t seed = 0,
                              int nstart = 10);

/// Per-lambda instability for all three schemes in one pass (the bootstrap
/// fits are shared; only the validation sets differ). Bootstrap draws use
/// seeds independent of lambda, so the same resamples are compared across
/// the grid.
std::vector<std::array<StabilityPoint, 3>> stability_profile(
    const DataMatrix& data, int k, const PenaltySpec& base,
    const std::vector<double>& grid, int B = 20, std::uint64_t seed = 0,
    int nstart = 10, int threads = 1);

/// Chooses the qualified lambda (every replication predicted >= 2 clusters
/// on the validation set) with minimal instability; ties go to the larger
/// lambda. Degenerate lambdas are disqualified.
SelectionReport select_stability(const DataMatrix& data, int k,
                                 const PenaltySpec& base,
                                 const std::vector<double>& grid,
                                 StabScheme scheme, int B = 20,
                                 std::uint64_t seed = 0, int nstart = 10,
                                 int threads = 1);

/// Walks consecutive distinct active sets along the path and computes, for
/// each transition, the observed WCSS increase delta (classical K-means
/// refit on each variable subset), S permutation references (entering
/// variables permuted; for non-nested transitions the two-sided
/// construction via the union set), their mean m and sd s, and the
/// standardized statistic D = (m - delta)/s. Observed and reference values
/// are divided by the number of entering variables when several enter at
/// once. Steps with s = 0 are recorded but marked invalid.
std::vector<GapStep> gap_deltas(const PathResult& path, const DataMatrix& data,
                                int S = 50, std::uint64_t seed = 0,
                                int refit_restarts = 10);

/// gap1 picks the step with maximal D; gap2 the smallest model (largest
/// lambda) whose D is within c standard deviations (the permutation s at
/// the maximizing step) of the maximum. The chosen lambda is the largest
/// grid lambda attaining that step's active set.
SelectionReport select_gap(const PathResult& path, const DataMatrix& data,
                           GapVariant variant, double c = 1.0, int S = 50,
                           std::uint64_t seed = 0, int refit_restarts = 10);

}  // namespace htkm
