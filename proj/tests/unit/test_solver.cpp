#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "htkm/metrics.hpp"
#include "htkm/simulate.hpp"
#include "htkm/solver.hpp"
#include "test_helpers.hpp"

using namespace htkm;

TEST_SUITE("solver") {

TEST_CASE("assign_points maps to the nearest center, ties to the lower index") {
  const auto data = test::column({-2, 2});
  Eigen::MatrixXd centers(2, 1);
  centers << -1, 1;
  const Partition part = assign_points(data, centers);
  CHECK(part.labels == std::vector<int>{0, 1});

  // A point equidistant from both centers goes to cluster 1.
  const auto tie = test::column({0});
  CHECK(assign_points(tie, centers).labels == std::vector<int>{0});

  // K = 1 sends everything to the only cluster.
  const Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  CHECK(assign_points(data, one).labels == std::vector<int>{0, 0});
}

TEST_CASE("assign_points rejects non-finite centers") {
  const auto data = test::column({1});
  Eigen::MatrixXd centers(1, 1);
  centers << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(assign_points(data, centers), NumericError);
}

TEST_CASE("cluster_means on hand examples") {
  const auto data = test::column({-1, -1, 1, 1});
  const Eigen::MatrixXd means =
      cluster_means(data, test::part_of({1, 1, 2, 2}, 2));
  CHECK(means(0, 0) == -1.0);
  CHECK(means(1, 0) == 1.0);

  // Singleton clusters reproduce the points themselves.
  const auto pts = test::matrix_from({{1, 2}, {3, 4}});
  const Eigen::MatrixXd single = cluster_means(pts, test::part_of({1, 2}, 2));
  CHECK(single == pts.values);

  // One cluster over standardized data sits at zero.
  const auto std_data = test::random_standardized(12, 2, 3);
  const Eigen::MatrixXd zero =
      cluster_means(std_data, Partition{std::vector<int>(12, 0), 1});
  CHECK(zero.isZero(1e-9));

  CHECK_THROWS_AS(cluster_means(data, test::part_of({1, 1, 1, 1}, 2)),
                  ContractViolation);
}

TEST_CASE("lloyd at lambda 0 is classical and converges in one sweep here") {
  const auto data = test::column({-2, -1.9, 1.9, 2});
  const FitResult res = lloyd_regularized(data, PenaltySpec{},
                                          test::part_of({1, 1, 2, 2}, 2));
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.centers(0, 0) == doctest::Approx(-1.95));
  CHECK(res.centers(1, 0) == doctest::Approx(1.95));
  CHECK(res.objective == doctest::Approx(0.0025));
}

TEST_CASE("hard threshold at lambda >= 1 collapses to the zero fit") {
  const auto data = test::random_standardized(20, 3, 44);
  Rng rng(5);
  const PenaltySpec spec{PenaltyFamily::HardThreshold, 1.0, false};
  const FitResult res =
      lloyd_regularized(data, spec, test::random_partition(20, 3, rng));
  CHECK(res.centers.isZero(0.0));
  CHECK(res.active_set.empty());
  // All clusters stay populated through the repair step.
  const std::vector<int> counts = cluster_counts(res.partition);
  for (int c : counts) CHECK(c > 0);
  // Objective is the WCSS against zero centers plus no penalty.
  CHECK(res.objective ==
        doctest::Approx(wcss(data, res.centers, res.partition)));
  CHECK(res.objective == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("objective trace is non-increasing for every family") {
  Rng rng(61);
  const PenaltyFamily families[] = {PenaltyFamily::HardThreshold,
                                    PenaltyFamily::Lasso, PenaltyFamily::Ridge,
                                    PenaltyFamily::GroupLasso};
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 12 + rng.uniform_int(20);
    const int p = 2 + rng.uniform_int(4);
    const int k = 2 + rng.uniform_int(2);
    const auto data = test::random_standardized(n, p, 6000 + trial);
    const PenaltySpec spec{families[trial % 4], 0.8 * rng.uniform01(),
                           trial % 8 >= 4};
    const FitResult res =
        lloyd_regularized(data, spec, test::random_partition(n, k, rng));
    for (std::size_t t = 1; t < res.objective_trace.size(); ++t) {
      CHECK(res.objective_trace[t] <= res.objective_trace[t - 1] + 1e-9);
    }
  }
}

TEST_CASE("sparse_init subset sizes follow the ceiling rule") {
  CHECK(sparse_init_subset_sizes(4) == std::vector<int>{1, 2, 4});
  CHECK(sparse_init_subset_sizes(1000) ==
        std::vector<int>{10, 20, 50, 100, 250, 500, 1000});
  CHECK(sparse_init_subset_sizes(1) == std::vector<int>{1});
  CHECK(sparse_init_subset_sizes(7) == std::vector<int>{1, 2, 4, 7});
}

TEST_CASE("sparse_init returns deduplicated valid partitions") {
  const auto data = test::random_standardized(30, 4, 91);
  const auto candidates = sparse_init(data, 3, PenaltySpec{}, 17);
  CHECK(!candidates.empty());
  CHECK(candidates.size() <= 3);  // at most one per distinct subset size
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CHECK(candidates[i].n() == 30);
    CHECK(candidates[i].k == 3);
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      CHECK(candidates[i].labels != candidates[j].labels);
  }
}

TEST_CASE("sparse_init with K = 1 yields the all-ones partition") {
  const auto data = test::random_standardized(10, 5, 13);
  const auto candidates = sparse_init(data, 1, PenaltySpec{}, 3);
  REQUIRE(candidates.size() == 1);
  CHECK(candidates[0].labels == std::vector<int>(10, 0));
}

TEST_CASE("fit separates two well-separated blobs perfectly") {
  Rng rng(100);
  Eigen::MatrixXd values(30, 1);
  std::vector<int> truth(30);
  for (int i = 0; i < 30; ++i) {
    const bool hi = i % 2 == 0;
    values(i, 0) = (hi ? 10.0 : -10.0) + 0.3 * rng.normal();
    truth[i] = hi ? 1 : 2;
  }
  const auto data = standardize(make_data_matrix(values)).data;
  const FitResult res = fit(data, 2, PenaltySpec{}, 10, 9);
  CHECK(adjusted_rand_index(std::span<const int>(res.partition.labels),
                            std::span<const int>(truth)) ==
        doctest::Approx(1.0));
}

TEST_CASE("fit is deterministic given the seed") {
  const auto data = test::random_standardized(40, 6, 50);
  const PenaltySpec spec{PenaltyFamily::Lasso, 0.15, false};
  const FitResult a = fit(data, 3, spec, 10, 2024);
  const FitResult b = fit(data, 3, spec, 10, 2024);
  CHECK(a.partition.labels == b.partition.labels);
  CHECK(a.centers == b.centers);
  CHECK(a.objective == b.objective);
}

TEST_CASE("fit requires standardized data when lambda is positive") {
  const auto raw = test::matrix_from({{1, 2}, {3, 4}, {5, 6}, {7, 8}});
  CHECK_THROWS_AS(fit(raw, 2, {PenaltyFamily::Ridge, 0.5, false}, 5, 1),
                  ConfigError);
  CHECK_NOTHROW(fit(raw, 2, PenaltySpec{}, 5, 1));  // lambda = 0 is classical
}

TEST_CASE("every family coincides with classical Lloyd at lambda 0") {
  Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const auto data = test::random_standardized(35, 4, 700 + trial);
    const Partition init = test::random_partition(35, 3, rng);
    const FitResult reference =
        lloyd_regularized(data, {PenaltyFamily::HardThreshold, 0.0, false}, init);
    for (PenaltyFamily family : {PenaltyFamily::Lasso, PenaltyFamily::Ridge,
                                 PenaltyFamily::GroupLasso}) {
      const FitResult res = lloyd_regularized(data, {family, 0.0, false}, init);
      CHECK(res.partition.labels == reference.partition.labels);
      CHECK(res.centers == reference.centers);
      CHECK(res.objective == reference.objective);
    }
    // The multi-start fit inherits the equivalence given equal seeds.
    const FitResult fit_ht =
        fit(data, 3, {PenaltyFamily::HardThreshold, 0.0, false}, 10, trial);
    const FitResult fit_gl =
        fit(data, 3, {PenaltyFamily::GroupLasso, 0.0, false}, 10, trial);
    CHECK(fit_ht.objective == fit_gl.objective);
    CHECK(fit_ht.partition.labels == fit_gl.partition.labels);
  }
}

TEST_CASE("fit matches exhaustive search on micro instances") {
  // All 2^n assignments with K = 2; the penalized objective of the best
  // enumerated (partition, update) pair is a global lower bound target.
  Rng rng(314);
  int matched = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 4 + rng.uniform_int(5);  // 4..8
    const int p = 1 + rng.uniform_int(2);
    const auto data = test::random_standardized(n, p, 8000 + trial);
    const PenaltyFamily family = static_cast<PenaltyFamily>(trial % 4);
    const PenaltySpec spec{family, 0.4 * rng.uniform01(), false};

    double best = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      Partition part{std::vector<int>(n), 2};
      for (int i = 0; i < n; ++i) part.labels[i] = (mask >> i) & 1;
      const Eigen::MatrixXd centers = update_centers(spec, data, part);
      best = std::min(best, penalized_objective(data, centers, part, spec));
    }
    const FitResult res = fit(data, 2, spec, 10, 9000 + trial);
    if (res.objective <= best + 1e-8) ++matched;
  }
  CHECK(matched >= 95);
}

TEST_CASE("default lambda grid matches the published formula") {
  const std::vector<double> grid = default_lambda_grid();
  REQUIRE(grid.size() == 41);
  CHECK(grid.front() == doctest::Approx(std::pow(10.0, 1.9)));
  CHECK(grid.front() == doctest::Approx(79.433).epsilon(1e-3));
  CHECK(grid[39] == doctest::Approx(0.01));
  CHECK(grid.back() == 0.0);
  CHECK(std::is_sorted(grid.rbegin(), grid.rend()));
}

TEST_CASE("lambda_path validates the grid and is schedule independent") {
  const auto data = test::random_standardized(25, 5, 30);
  CHECK_THROWS_AS(
      lambda_path(data, 2, PenaltySpec{}, {0.1, 0.5}, 4, 1, 1),
      ConfigError);
  CHECK_THROWS_AS(lambda_path(data, 2, PenaltySpec{}, {}, 4, 1, 1), ConfigError);

  const std::vector<double> grid{0.8, 0.4, 0.2, 0.1, 0.0};
  const PenaltySpec base{PenaltyFamily::HardThreshold, 0.0, false};
  const PathResult serial = lambda_path(data, 2, base, grid, 6, 77, 1);
  const PathResult threaded = lambda_path(data, 2, base, grid, 6, 77, 4);
  REQUIRE(serial.fits.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(serial.fits[i].partition.labels == threaded.fits[i].partition.labels);
    CHECK(serial.fits[i].centers == threaded.fits[i].centers);
    CHECK(serial.fits[i].lambda == grid[i]);
  }
  CHECK(serial.fingerprint == data_fingerprint(data));
}

TEST_CASE("simulated data recovers labels at strong separation") {
  const LabeledDataset sim = simulate_dataset({80, 50, 2, 0.8, 5150});
  const auto data = standardize(sim.data).data;
  const FitResult res = fit(data, 2, PenaltySpec{}, 10, 3);
  const double ari = adjusted_rand_index(
      std::span<const int>(res.partition.labels), std::span<const int>(sim.labels));
  CHECK(ari >= 0.95);
}

}  // TEST_SUITE
