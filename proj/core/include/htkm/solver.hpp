#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "htkm/data_matrix.hpp"
#include "htkm/metrics.hpp"
#include "htkm/partition.hpp"
#include "htkm/penalties.hpp"

namespace htkm {

struct FitResult {
  Eigen::MatrixXd centers;
  Partition partition;
  double objective = 0.0;
  double wcss = 0.0;
  std::vector<int> active_set;  // 0-based column indices with nonzero centers
  int iterations = 0;
  bool converged = false;
  double lambda = 0.0;
  PenaltyFamily family = PenaltyFamily::HardThreshold;
  bool adaptive = false;
  // Objective after each center update; used by the monotonicity checks.
  std::vector<double> objective_trace;
};

struct PathResult {
  std::vector<double> grid;  // descending lambdas
  std::vector<FitResult> fits;
  std::uint64_t fingerprint = 0;
  int k = 0;
  PenaltyFamily family = PenaltyFamily::HardThreshold;
  bool adaptive = false;
};

/// Nearest-center assignment in Euclidean distance, ties to the lowest
/// cluster index.
Partition assign_points(const DataMatrix& data, const Eigen::MatrixXd& centers);

/// Row k = mean of the observations assigned to cluster k. Throws
/// ContractViolation on an empty cluster.
Eigen::MatrixXd cluster_means(const DataMatrix& data, const Partition& part);

/// Alternates update_centers and assign_points from an initial partition
/// until the partition stops changing or max_iter is hit. Empty clusters
/// after an assignment step are repaired by moving the point farthest from
/// its current center into each empty cluster (one point per cluster,
/// farthest first). Returns the best state visited; non-convergence is
/// reported via converged=false, not an error.
FitResult lloyd_regularized(const DataMatrix& data, const PenaltySpec& spec,
                            const Partition& init, int max_iter = 100);

/// Classical K-means: multi-restart regularized Lloyd at lambda = 0 with
/// centers seeded from k distinct observations per restart.
FitResult classical_kmeans(const DataMatrix& data, int k, int restarts,
                           std::uint64_t seed, int max_iter = 100);

/// Variable-subset sizes used by the sparse initialization: ceil(f*p) for
/// f in {1,2,5,10,25,50,100}%, deduplicated ascending, each at least 1.
std::vector<int> sparse_init_subset_sizes(int p);

/// Candidate starting partitions for the regularized solver: classical
/// K-means is run on all variables to rank columns by center norm d_j,
/// then re-run on each top-d_j subset from sparse_init_subset_sizes.
/// Duplicate partitions are removed.
std::vector<Partition> sparse_init(const DataMatrix& data, int k,
                                   const PenaltySpec& spec, std::uint64_t seed,
                                   int classic_restarts = 10);

/// Full fit: regularized Lloyd from every sparse_init candidate plus
/// nstart random partitions, keeping the lowest penalized objective.
/// Deterministic given the seed.
FitResult fit(const DataMatrix& data, int k, const PenaltySpec& spec,
              int nstart = 10, std::uint64_t seed = 0);

/// The 40-point grid 10^(-2 + 4i/40), i = 0..39, descending, with a
/// terminal 0 appended (41 values total).
std::vector<double> default_lambda_grid();

/// One independent fit per grid value (no warm starts); grid must be
/// descending and nonnegative. Parallelizable over grid points; each point
/// uses a seed derived from (seed, grid index) so any schedule gives the
/// same result.
PathResult lambda_path(const DataMatrix& data, int k, const PenaltySpec& base,
                       std::vector<double> grid, int nstart = 10,
                       std::uint64_t seed = 0, int threads = 1);

}  // namespace htkm
