#include "htkm/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "htkm/parallel.hpp"
#include "htkm/rng.hpp"

namespace htkm {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

SelectionMethod selection_method_from_string(const std::string& name) {
  if (name == "aic") return SelectionMethod::Aic;
  if (name == "bic") return SelectionMethod::Bic;
  if (name == "gap1") return SelectionMethod::Gap1;
  if (name == "gap2") return SelectionMethod::Gap2;
  if (name == "stab1") return SelectionMethod::Stab1;
  if (name == "stab2") return SelectionMethod::Stab2;
  if (name == "stab3") return SelectionMethod::Stab3;
  throw ConfigError("unknown selection method: " + name);
}

std::string to_string(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::Aic:
      return "aic";
    case SelectionMethod::Bic:
      return "bic";
    case SelectionMethod::Gap1:
      return "gap1";
    case SelectionMethod::Gap2:
      return "gap2";
    case SelectionMethod::Stab1:
      return "stab1";
    case SelectionMethod::Stab2:
      return "stab2";
    case SelectionMethod::Stab3:
      return "stab3";
  }
  return "?";
}

namespace {

void check_path(const PathResult& path, const DataMatrix& data) {
  if (path.fits.empty() || path.grid.size() != path.fits.size())
    throw ConfigError("selection: empty or inconsistent path");
  if (path.fingerprint != data_fingerprint(data))
    throw ConfigError("selection: path was not computed on this data");
}

SelectionReport information_criterion(const PathResult& path,
                                      const DataMatrix& data, double coef,
                                      SelectionMethod method) {
  check_path(path, data);
  const double n = static_cast<double>(data.n());

  SelectionReport report;
  report.method = method;
  report.grid = path.grid;
  report.scores.resize(path.grid.size());
  report.wcss_all.resize(path.grid.size());
  report.active_counts.resize(path.grid.size());

  int best = -1;
  for (std::size_t i = 0; i < path.fits.size(); ++i) {
    const FitResult& f = path.fits[i];
    const double wcss_all = n * wcss(data, f.centers, f.partition);
    const int q = static_cast<int>(f.active_set.size());
    report.wcss_all[i] = wcss_all;
    report.active_counts[i] = q;
    report.scores[i] = wcss_all + coef * path.k * q;
    if (best < 0 || report.scores[i] < report.scores[best]) {
      best = static_cast<int>(i);  // ties keep the earlier (larger) lambda
    }
  }
  report.chosen_lambda = path.grid[best];
  report.chosen_fit = path.fits[best];
  return report;
}

}  // namespace

SelectionReport aic(const PathResult& path, const DataMatrix& data) {
  return information_criterion(path, data, 2.0, SelectionMethod::Aic);
}

SelectionReport bic(const PathResult& path, const DataMatrix& data) {
  return information_criterion(path, data, std::log(static_cast<double>(data.n())),
                               SelectionMethod::Bic);
}

double clustering_distance(const Partition& a, const Partition& b) {
  const int n = a.n();
  if (n != b.n())
    throw ShapeError("clustering_distance: partitions differ in length");
  if (n < 2) throw ShapeError("clustering_distance: need at least 2 points");
  long long disagreements = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same_a = a.labels[i] == a.labels[j];
      const bool same_b = b.labels[i] == b.labels[j];
      if (same_a != same_b) ++disagreements;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * (n - 1);
  return static_cast<double>(disagreements) / pairs;
}

namespace {

std::vector<int> bootstrap_indices(Rng& rng, int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = rng.uniform_int(n);
  return idx;
}

std::vector<int> unique_sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int distinct_labels(std::span<const int> labels) {
  std::set<int> seen(labels.begin(), labels.end());
  return static_cast<int>(seen.size());
}

struct ReplicationDraw {
  std::vector<int> boot1, boot2, boot3;
  std::vector<int> intersection;  // unique(boot1) n unique(boot2)
};

// Bootstrap draws depend only on (seed, replication), never on lambda, so
// every grid point is evaluated on the same resamples.
std::vector<ReplicationDraw> make_draws(int n, int B, std::uint64_t seed) {
  std::vector<ReplicationDraw> draws(B);
  for (int b = 0; b < B; ++b) {
    const std::uint64_t rb = derive_seed(seed, 0xB007ULL, b);
    Rng r1(derive_seed(rb, 1)), r2(derive_seed(rb, 2)), r3(derive_seed(rb, 3));
    draws[b].boot1 = bootstrap_indices(r1, n);
    draws[b].boot2 = bootstrap_indices(r2, n);
    draws[b].boot3 = bootstrap_indices(r3, n);
    const std::vector<int> u1 = unique_sorted(draws[b].boot1);
    const std::vector<int> u2 = unique_sorted(draws[b].boot2);
    std::set_intersection(u1.begin(), u1.end(), u2.begin(), u2.end(),
                          std::back_inserter(draws[b].intersection));
  }
  return draws;
}

std::array<StabilityPoint, 3> instability_at_lambda(
    const DataMatrix& data, int k, const PenaltySpec& spec,
    const std::vector<ReplicationDraw>& draws, std::uint64_t seed, int nstart) {
  const int n = data.n();
  std::array<StabilityPoint, 3> out;
  for (auto& pt : out) pt.lambda = spec.lambda;
  std::array<double, 3> sums = {0.0, 0.0, 0.0};

  for (std::size_t b = 0; b < draws.size(); ++b) {
    const std::uint64_t rb = derive_seed(seed, 0xF17ULL, b);
    const FitResult fit1 =
        fit(select_rows(data, draws[b].boot1), k, spec, nstart,
            derive_seed(rb, 1));
    const FitResult fit2 =
        fit(select_rows(data, draws[b].boot2), k, spec, nstart,
            derive_seed(rb, 2));

    // Nearest fitted center over that fit's active variables. Inactive
    // columns hold zeros in every center row, so distances over all
    // columns rank identically.
    const Partition full1 = assign_points(data, fit1.centers);
    const Partition full2 = assign_points(data, fit2.centers);

    for (int scheme = 0; scheme < 3; ++scheme) {
      std::vector<int> rows;
      switch (scheme) {
        case 0:
          rows.resize(n);
          for (int i = 0; i < n; ++i) rows[i] = i;
          break;
        case 1:
          rows = draws[b].intersection;
          break;
        default:
          rows = draws[b].boot3;
      }
      if (rows.size() < 2) continue;  // unusable validation set; skip
      Partition v1{std::vector<int>(rows.size()), k};
      Partition v2{std::vector<int>(rows.size()), k};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        v1.labels[i] = full1.labels[rows[i]];
        v2.labels[i] = full2.labels[rows[i]];
      }
      if (distinct_labels(v1.labels) < 2 || distinct_labels(v2.labels) < 2)
        out[scheme].degenerate = true;
      sums[scheme] += clustering_distance(v1, v2);
      ++out[scheme].used_replications;
    }
  }
  for (int scheme = 0; scheme < 3; ++scheme) {
    if (out[scheme].used_replications == 0)
      throw DataError("instability: every replication had a validation set "
                      "with fewer than 2 points");
    out[scheme].instability = sums[scheme] / out[scheme].used_replications;
  }
  return out;
}

}  // namespace

InstabilityResult instability(const DataMatrix& data, int k,
                              const PenaltySpec& spec, StabScheme scheme,
                              int B, std::uint64_t seed, int nstart) {
  if (B < 1) throw ConfigError("instability: B must be >= 1");
  const auto draws = make_draws(data.n(), B, seed);
  const auto points = instability_at_lambda(data, k, spec, draws, seed, nstart);
  const auto& pt = points[static_cast<int>(scheme)];
  return InstabilityResult{pt.instability, pt.used_replications, pt.degenerate};
}

std::vector<std::array<StabilityPoint, 3>> stability_profile(
    const DataMatrix& data, int k, const PenaltySpec& base,
    const std::vector<double>& grid, int B, std::uint64_t seed, int nstart,
    int threads) {
  if (grid.empty()) throw ConfigError("stability_profile: empty grid");
  if (B < 1) throw ConfigError("stability_profile: B must be >= 1");
  const auto draws = make_draws(data.n(), B, seed);
  std::vector<std::array<StabilityPoint, 3>> profile(grid.size());
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
    PenaltySpec spec = base;
    spec.lambda = grid[i];
    profile[i] = instability_at_lambda(data, k, spec, draws, seed, nstart);
  });
  return profile;
}

SelectionReport select_stability(const DataMatrix& data, int k,
                                 const PenaltySpec& base,
                                 const std::vector<double>& grid,
                                 StabScheme scheme, int B, std::uint64_t seed,
                                 int nstart, int threads) {
  const auto profile =
      stability_profile(data, k, base, grid, B, seed, nstart, threads);
  const int si = static_cast<int>(scheme);

  SelectionReport report;
  report.method = scheme == StabScheme::Stab1   ? SelectionMethod::Stab1
                  : scheme == StabScheme::Stab2 ? SelectionMethod::Stab2
                                                : SelectionMethod::Stab3;
  report.grid = grid;
  report.scores.resize(grid.size());
  report.stability.resize(grid.size());

  int best = -1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    report.stability[i] = profile[i][si];
    report.scores[i] = profile[i][si].instability;
    if (profile[i][si].degenerate) continue;  // disqualified
    if (best < 0 || report.scores[i] < report.scores[best]) {
      best = static_cast<int>(i);  // ties keep the larger lambda
    }
  }
  if (best < 0)
    throw DataError(
        "select_stability: every lambda produced degenerate (single-cluster) "
        "validation predictions");
  PenaltySpec chosen = base;
  chosen.lambda = grid[best];
  report.chosen_lambda = grid[best];
  report.chosen_fit =
      fit(data, k, chosen, nstart, derive_seed(seed, 0xC4053ULL));
  return report;
}

// ---------------------------------------------------------------------------
// Gap method
// ---------------------------------------------------------------------------

namespace {

std::uint64_t hash_indices(const std::vector<int>& v) {
  std::uint64_t h = 1469598103934665603ULL;
  for (int x : v) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
    h *= 1099511628211ULL;
  }
  return h;
}

struct Refit {
  double w = 0.0;  // (1/n)-normalized WCSS of the best K-means found
  Partition part;
  bool empty_set = false;
};

struct RefitCache {
  const DataMatrix& data;
  int k;
  int restarts;
  std::uint64_t seed;
  std::map<std::vector<int>, Refit> entries;

  Refit& get(const std::vector<int>& cols) {
    auto it = entries.find(cols);
    if (it != entries.end()) return it->second;
    Refit refit;
    if (cols.empty()) {
      refit.empty_set = true;
      refit.w = 0.0;
      refit.part = Partition{std::vector<int>(data.n(), 0), k};
    } else {
      const DataMatrix sub = select_columns(data, cols);
      FitResult res = classical_kmeans(sub, k, restarts,
                                       derive_seed(seed, hash_indices(cols)));
      refit.w = res.wcss;
      refit.part = std::move(res.partition);
    }
    return entries.emplace(cols, std::move(refit)).first->second;
  }

  // Re-runs Lloyd on the subset from the given partition; keeps the result
  // when it strictly improves the cached optimum. Used to enforce the
  // ordering W(A) <= WCSS_A(pi) for every partition pi seen elsewhere.
  bool improve(const std::vector<int>& cols, const Partition& start) {
    Refit& entry = get(cols);
    if (entry.empty_set) return false;
    const DataMatrix sub = select_columns(data, cols);
    FitResult res = lloyd_regularized(sub, PenaltySpec{}, start);
    if (res.wcss < entry.w - 1e-15) {
      entry.w = res.wcss;
      entry.part = std::move(res.partition);
      return true;
    }
    return false;
  }
};

// Columns of `base_cols` as-is plus `perm_cols` with rows permuted (one
// independent permutation per column).
DataMatrix permuted_augmented(const DataMatrix& data,
                              const std::vector<int>& base_cols,
                              const std::vector<int>& perm_cols, Rng& rng) {
  const int n = data.n();
  Eigen::MatrixXd values(n, base_cols.size() + perm_cols.size());
  std::vector<std::string> names;
  names.reserve(base_cols.size() + perm_cols.size());
  int out = 0;
  for (int j : base_cols) {
    values.col(out++) = data.values.col(j);
    names.push_back(data.column_names[j]);
  }
  for (int j : perm_cols) {
    const std::vector<int> perm = rng.permutation(n);
    for (int i = 0; i < n; ++i) values(i, out) = data.values(perm[i], j);
    names.push_back(data.column_names[j] + "*");
    ++out;
  }
  return DataMatrix{std::move(values), std::move(names), data.standardized};
}

struct KmeansOutcome {
  double w = std::numeric_limits<double>::infinity();
  Partition part;
};

KmeansOutcome kmeans_with_starts(const DataMatrix& sub, int k,
                                 const std::vector<Partition>& extra_starts,
                                 int random_restarts, std::uint64_t seed) {
  KmeansOutcome best;
  if (random_restarts > 0) {
    FitResult res = classical_kmeans(sub, k, random_restarts, seed);
    best.w = res.wcss;
    best.part = std::move(res.partition);
  }
  for (const Partition& start : extra_starts) {
    FitResult res = lloyd_regularized(sub, PenaltySpec{}, start);
    if (res.wcss < best.w) {
      best.w = res.wcss;
      best.part = std::move(res.partition);
    }
  }
  return best;
}

std::vector<int> set_difference(const std::vector<int>& a,
                                const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<GapStep> gap_deltas(const PathResult& path, const DataMatrix& data,
                                int S, std::uint64_t seed, int refit_restarts) {
  check_path(path, data);
  if (S < 2) throw ConfigError("gap_deltas: S must be >= 2");
  if (!data.standardized)
    throw ConfigError("gap_deltas: requires standardized data");

  // Plateau representatives: consecutive distinct active sets.
  std::vector<std::vector<int>> sets;
  std::vector<double> first_lambda;  // largest lambda attaining each set
  for (std::size_t i = 0; i < path.fits.size(); ++i) {
    if (sets.empty() || path.fits[i].active_set != sets.back()) {
      sets.push_back(path.fits[i].active_set);
      first_lambda.push_back(path.grid[i]);
    }
  }

  RefitCache cache{data, path.k, refit_restarts, derive_seed(seed, 0xCACEULL), {}};
  std::vector<GapStep> steps;

  for (std::size_t j = 1; j < sets.size(); ++j) {
    const std::vector<int>& prev = sets[j - 1];
    const std::vector<int>& cur = sets[j];

    GapStep step;
    step.from_set = prev;
    step.to_set = cur;
    step.entering = set_difference(cur, prev);
    step.dropped = set_difference(prev, cur);
    // Largest grid lambda whose fit attains the destination set.
    step.lambda = first_lambda[j];
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
      if (path.fits[i].active_set == cur) {
        step.lambda = path.grid[i];
        break;
      }
    }
    const double divisor =
        std::max<std::size_t>(step.entering.size(), std::size_t{1});

    // A single variable entering an empty set is exactly permutation
    // invariant: the reference equals the observed value, so s = 0 and the
    // step carries no information.
    if (prev.empty() && step.entering.size() == 1) {
      cache.get(cur);
      step.delta = cache.get(cur).w / divisor;
      step.delta_star.assign(S, step.delta);
      step.m = step.delta;
      step.s = 0.0;
      step.d = kNaN;
      step.valid = false;
      steps.push_back(std::move(step));
      continue;
    }

    for (int attempt = 0; attempt < 8; ++attempt) {
      const bool allow_restart = attempt < 7;
      bool improved = false;

      // Cross-improve the two observed refits until neither moves; at the
      // fixed point W(prev) <= WCSS_prev(part(cur)) and vice versa, which
      // pins 0 <= delta <= 1 on standardized data.
      if (!prev.empty() && !cur.empty()) {
        for (int round = 0; round < 64; ++round) {
          const bool a = cache.improve(cur, cache.get(prev).part);
          const bool b = cache.improve(prev, cache.get(cur).part);
          if (!a && !b) break;
        }
      }
      const double w_prev = cache.get(prev).w;
      const double w_cur = cache.get(cur).w;
      step.delta = (w_cur - w_prev) / divisor;

      step.delta_star.clear();
      step.delta_star.reserve(S);
      for (int s_idx = 0; s_idx < S && !(improved && allow_restart); ++s_idx) {
        Rng perm_rng(derive_seed(seed, 0x9e12ULL + j, s_idx));

        // First term: variables of prev kept, entering variables permuted.
        const DataMatrix aug1 =
            permuted_augmented(data, prev, step.entering, perm_rng);
        std::vector<Partition> starts1;
        if (!prev.empty()) starts1.push_back(cache.get(prev).part);
        const KmeansOutcome o1 = kmeans_with_starts(
            aug1, path.k, starts1, 5,
            derive_seed(seed, 0xAE5ULL + j, s_idx, 1));
        if (!prev.empty()) improved |= cache.improve(prev, o1.part);

        double ref = (o1.w - cache.get(prev).w) / divisor;
        if (!step.dropped.empty()) {
          // Two-sided construction for non-nested transitions.
          const DataMatrix aug2 =
              permuted_augmented(data, cur, step.dropped, perm_rng);
          std::vector<Partition> starts2;
          if (!cur.empty()) starts2.push_back(cache.get(cur).part);
          const KmeansOutcome o2 = kmeans_with_starts(
              aug2, path.k, starts2, 5,
              derive_seed(seed, 0xAE5ULL + j, s_idx, 2));
          if (!cur.empty()) improved |= cache.improve(cur, o2.part);
          ref -= (o2.w - cache.get(cur).w) / divisor;
        }
        step.delta_star.push_back(ref);
      }
      // An improved cached optimum invalidates the values recorded so far;
      // redo the step with the better caches (same permutation seeds).
      if (!improved) break;
    }

    double mean = 0.0;
    for (double v : step.delta_star) mean += v;
    mean /= static_cast<double>(step.delta_star.size());
    double ss = 0.0;
    for (double v : step.delta_star) ss += (v - mean) * (v - mean);
    const double sd = step.delta_star.size() > 1
                          ? std::sqrt(ss / (step.delta_star.size() - 1))
                          : 0.0;
    step.m = mean;
    step.s = sd;
    if (sd > 0.0) {
      step.d = (mean - step.delta) / sd;
      step.valid = std::isfinite(step.d);
    } else {
      step.d = kNaN;
      step.valid = false;
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

SelectionReport select_gap(const PathResult& path, const DataMatrix& data,
                           GapVariant variant, double c, int S,
                           std::uint64_t seed, int refit_restarts) {
  if (c < 0.0) throw ConfigError("select_gap: c must be >= 0");
  std::vector<GapStep> steps = gap_deltas(path, data, S, seed, refit_restarts);

  SelectionReport report;
  report.method =
      variant == GapVariant::Gap1 ? SelectionMethod::Gap1 : SelectionMethod::Gap2;
  report.grid = path.grid;

  int best = -1;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (!steps[j].valid) continue;
    if (best < 0 || steps[j].d > steps[best].d) best = static_cast<int>(j);
  }
  if (best < 0)
    throw DataError(
        "select_gap: no step has a defined D statistic; use AIC/BIC instead");

  int chosen = best;
  if (variant == GapVariant::Gap2) {
    const double threshold = steps[best].d - c * steps[best].s;
    for (std::size_t j = 0; j < steps.size(); ++j) {
      if (!steps[j].valid || steps[j].d < threshold) continue;
      if (steps[j].to_set.size() < steps[chosen].to_set.size() ||
          (steps[j].to_set.size() == steps[chosen].to_set.size() &&
           steps[j].lambda > steps[chosen].lambda)) {
        chosen = static_cast<int>(j);
      }
    }
  }

  // Score per grid point: D of the step that entered its active set.
  report.scores.assign(path.grid.size(), kNaN);
  for (std::size_t i = 0; i < path.fits.size(); ++i) {
    for (const GapStep& step : steps) {
      if (path.fits[i].active_set == step.to_set) {
        report.scores[i] = step.d;
        break;
      }
    }
  }

  // Largest grid lambda attaining the chosen active set.
  int fit_index = -1;
  for (std::size_t i = 0; i < path.fits.size(); ++i) {
    if (path.fits[i].active_set == steps[chosen].to_set) {
      fit_index = static_cast<int>(i);
      break;
    }
  }
  report.chosen_lambda = path.grid[fit_index];
  report.chosen_fit = path.fits[fit_index];
  report.gap_steps = std::move(steps);
  return report;
}

}  // namespace htkm
