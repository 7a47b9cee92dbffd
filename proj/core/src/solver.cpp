#include "htkm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "htkm/parallel.hpp"
#include "htkm/rng.hpp"

namespace htkm {

Partition assign_points(const DataMatrix& data, const Eigen::MatrixXd& centers) {
  const int n = data.n();
  const int k = static_cast<int>(centers.rows());
  if (k < 1) throw ConfigError("assign_points: need at least one center");
  if (centers.cols() != data.values.cols())
    throw ShapeError("assign_points: center and data column counts differ");
  if (!centers.allFinite())
    throw NumericError("assign_points: non-finite center");

  Partition part;
  part.k = k;
  part.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_dist = (data.values.row(i) - centers.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
      const double dist = (data.values.row(i) - centers.row(c)).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    part.labels[i] = best;
  }
  return part;
}

Eigen::MatrixXd cluster_means(const DataMatrix& data, const Partition& part) {
  if (part.n() != data.n())
    throw ShapeError("cluster_means: assignment length != n");
  validate_partition(part);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(part.k, data.p());
  std::vector<int> counts(part.k, 0);
  for (int i = 0; i < data.n(); ++i) {
    sums.row(part.labels[i]) += data.values.row(i);
    ++counts[part.labels[i]];
  }
  for (int c = 0; c < part.k; ++c) {
    if (counts[c] == 0)
      throw ContractViolation("cluster_means: cluster " + std::to_string(c + 1) +
                              " is empty");
    sums.row(c) /= static_cast<double>(counts[c]);
  }
  return sums;
}

namespace {

// Moves the point farthest from its current center into each empty cluster,
// farthest first, never emptying another cluster in the process.
void repair_empty_clusters(const DataMatrix& data,
                           const Eigen::MatrixXd& centers, Partition& part) {
  std::vector<int> counts = cluster_counts(part);
  std::vector<bool> moved(part.labels.size(), false);
  for (int c = 0; c < part.k; ++c) {
    if (counts[c] > 0) continue;
    int farthest = -1;
    double farthest_dist = -1.0;
    for (int i = 0; i < part.n(); ++i) {
      if (moved[i] || counts[part.labels[i]] <= 1) continue;
      const double dist =
          (data.values.row(i) - centers.row(part.labels[i])).squaredNorm();
      if (dist > farthest_dist) {
        farthest_dist = dist;
        farthest = i;
      }
    }
    if (farthest < 0)
      throw ContractViolation("cannot repair empty cluster: n < k");
    --counts[part.labels[farthest]];
    part.labels[farthest] = c;
    counts[c] = 1;
    moved[farthest] = true;
  }
}

// Initial partitions may come from arbitrary sources; make sure every
// cluster is populated before the first center update.
void repair_initial_partition(const DataMatrix& data, Partition& part) {
  std::vector<int> counts = cluster_counts(part);
  bool any_empty = false;
  for (int c : counts) any_empty |= (c == 0);
  if (!any_empty) return;

  // Centers of the nonempty clusters; empty rows sit at zero, which only
  // matters for distance ranking of candidates.
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(part.k, data.p());
  for (int i = 0; i < data.n(); ++i)
    centers.row(part.labels[i]) += data.values.row(i);
  for (int c = 0; c < part.k; ++c)
    if (counts[c] > 0) centers.row(c) /= static_cast<double>(counts[c]);
  repair_empty_clusters(data, centers, part);
}

}  // namespace

FitResult lloyd_regularized(const DataMatrix& data, const PenaltySpec& spec,
                            const Partition& init, int max_iter) {
  if (init.n() != data.n())
    throw ShapeError("lloyd_regularized: init length != n");
  validate_partition(init);
  if (init.k > data.n())
    throw ConfigError("lloyd_regularized: k exceeds number of observations");
  if (max_iter < 1) throw ConfigError("lloyd_regularized: max_iter must be >= 1");

  Partition part = init;
  repair_initial_partition(data, part);

  FitResult result;
  result.lambda = spec.lambda;
  result.family = spec.family;
  result.adaptive = spec.adaptive;

  Eigen::MatrixXd centers;
  double best_objective = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    centers = update_centers(spec, data, part);
    const double objective = penalized_objective(data, centers, part, spec);
    if (objective > previous + 1e-9) {
      // Only an empty-cluster repair can push the objective up; continuing
      // from here could cycle, so stop at the best state seen.
      break;
    }
    result.objective_trace.push_back(objective);
    previous = objective;
    if (objective < best_objective) {
      best_objective = objective;
      result.centers = centers;
      result.partition = part;
      result.objective = objective;
    }
    Partition next = assign_points(data, centers);
    repair_empty_clusters(data, centers, next);
    if (next == part) {
      converged = true;
      ++it;
      break;
    }
    part = std::move(next);
  }

  result.iterations = it;
  result.converged = converged;
  result.wcss = wcss(data, result.centers, result.partition);
  result.active_set = active_columns(result.centers);
  return result;
}

FitResult classical_kmeans(const DataMatrix& data, int k, int restarts,
                           std::uint64_t seed, int max_iter) {
  if (k < 1) throw ConfigError("classical_kmeans: k must be >= 1");
  if (k > data.n())
    throw ConfigError("classical_kmeans: k exceeds number of observations");
  if (restarts < 1) throw ConfigError("classical_kmeans: restarts must be >= 1");

  const PenaltySpec unpenalized{};  // lambda = 0
  FitResult best;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, 0x5eedULL, static_cast<std::uint64_t>(r)));
    const std::vector<int> rows = rng.sample_without_replacement(data.n(), k);
    Eigen::MatrixXd centers(k, data.p());
    for (int c = 0; c < k; ++c) centers.row(c) = data.values.row(rows[c]);
    Partition init = assign_points(data, centers);
    repair_empty_clusters(data, centers, init);
    FitResult candidate = lloyd_regularized(data, unpenalized, init, max_iter);
    if (!have_best || candidate.objective < best.objective) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

std::vector<int> sparse_init_subset_sizes(int p) {
  static constexpr double fractions[] = {0.01, 0.02, 0.05, 0.10, 0.25, 0.50, 1.0};
  std::set<int> sizes;
  for (double f : fractions) {
    sizes.insert(std::max(1, static_cast<int>(std::ceil(f * p))));
  }
  return {sizes.begin(), sizes.end()};
}

std::vector<Partition> sparse_init(const DataMatrix& data, int k,
                                   const PenaltySpec& /*spec*/,
                                   std::uint64_t seed, int classic_restarts) {
  if (k > data.n()) throw ConfigError("sparse_init: k exceeds n");

  const FitResult base =
      classical_kmeans(data, k, classic_restarts, derive_seed(seed, 0));
  const Eigen::VectorXd norms = center_column_norms(base.centers);

  // Column order by descending d_j, index order breaking ties.
  std::vector<int> order(data.p());
  for (int j = 0; j < data.p(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms(a) > norms(b); });

  std::vector<Partition> candidates;
  const std::vector<int> sizes = sparse_init_subset_sizes(data.p());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    std::vector<int> subset(order.begin(), order.begin() + sizes[si]);
    std::sort(subset.begin(), subset.end());
    const DataMatrix sub = select_columns(data, subset);
    FitResult run = classical_kmeans(sub, k, classic_restarts,
                                     derive_seed(seed, si + 1));
    bool duplicate = false;
    for (const Partition& existing : candidates)
      duplicate |= (existing == run.partition);
    if (!duplicate) candidates.push_back(std::move(run.partition));
  }
  return candidates;
}

FitResult fit(const DataMatrix& data, int k, const PenaltySpec& spec,
              int nstart, std::uint64_t seed) {
  if (k < 1) throw ConfigError("fit: k must be >= 1");
  if (k > data.n()) throw ConfigError("fit: k exceeds number of observations");
  if (spec.lambda > 0.0 && !data.standardized)
    throw ConfigError("fit: penalized fitting requires standardized data");

  std::vector<Partition> candidates =
      sparse_init(data, k, spec, derive_seed(seed, 1));

  Rng rng(derive_seed(seed, 2));
  for (int r = 0; r < nstart; ++r) {
    Partition part;
    part.k = k;
    part.labels.resize(data.n());
    for (int i = 0; i < data.n(); ++i) part.labels[i] = rng.uniform_int(k);
    std::vector<int> counts = cluster_counts(part);
    for (int c = 0; c < k; ++c) {
      while (counts[c] == 0) {
        const int i = rng.uniform_int(data.n());
        if (counts[part.labels[i]] > 1) {
          --counts[part.labels[i]];
          part.labels[i] = c;
          counts[c] = 1;
        }
      }
    }
    candidates.push_back(std::move(part));
  }

  FitResult best;
  bool have_best = false;
  for (const Partition& init : candidates) {
    FitResult candidate = lloyd_regularized(data, spec, init);
    if (!have_best || candidate.objective < best.objective) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  grid.reserve(41);
  for (int i = 39; i >= 0; --i) {
    grid.push_back(std::pow(10.0, -2.0 + 4.0 * i / 40.0));
  }
  grid.push_back(0.0);
  return grid;
}

PathResult lambda_path(const DataMatrix& data, int k, const PenaltySpec& base,
                       std::vector<double> grid, int nstart, std::uint64_t seed,
                       int threads) {
  if (grid.empty()) throw ConfigError("lambda_path: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0) throw ConfigError("lambda_path: negative lambda");
    if (i > 0 && grid[i] >= grid[i - 1])
      throw ConfigError("lambda_path: grid must be strictly descending");
  }

  PathResult path;
  path.grid = std::move(grid);
  path.k = k;
  path.family = base.family;
  path.adaptive = base.adaptive;
  path.fingerprint = data_fingerprint(data);
  path.fits.resize(path.grid.size());

  parallel_for(static_cast<int>(path.grid.size()), threads, [&](int i) {
    PenaltySpec spec = base;
    spec.lambda = path.grid[i];
    path.fits[i] = fit(data, k, spec, nstart,
                       derive_seed(seed, 0xA11ULL, static_cast<std::uint64_t>(i)));
  });
  return path;
}

}  // namespace htkm
