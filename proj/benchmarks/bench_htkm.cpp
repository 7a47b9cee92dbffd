#include <benchmark/benchmark.h>

#include "htkm/metrics.hpp"
#include "htkm/rng.hpp"
#include "htkm/selection.hpp"
#include "htkm/simulate.hpp"
#include "htkm/solver.hpp"

using namespace htkm;

namespace {

DataMatrix bench_data(int n, int p, int k, std::uint64_t seed) {
  const LabeledDataset sim =
      simulate_dataset({n, std::max(p, 50), k, 0.8, seed});
  DataMatrix data = standardize(sim.data).data;
  if (data.p() == p) return data;
  std::vector<int> cols(p);
  for (int j = 0; j < p; ++j) cols[j] = j;
  return select_columns(data, cols);
}

Partition bench_partition(int n, int k, std::uint64_t seed) {
  Rng rng(seed);
  Partition part{std::vector<int>(n), k};
  for (int i = 0; i < n; ++i) part.labels[i] = rng.uniform_int(k);
  for (int c = 0; c < k; ++c) part.labels[c] = c;
  return part;
}

void BM_AssignPoints(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DataMatrix data = bench_data(n, 50, 4, 1);
  const Eigen::MatrixXd centers =
      cluster_means(data, bench_partition(n, 4, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assign_points(data, centers));
  }
}
BENCHMARK(BM_AssignPoints)->Arg(80)->Arg(800);

void BM_UpdateCenters(benchmark::State& state) {
  const PenaltyFamily family = static_cast<PenaltyFamily>(state.range(0));
  const DataMatrix data = bench_data(200, 50, 4, 3);
  const Partition part = bench_partition(200, 4, 4);
  const PenaltySpec spec{family, 0.2, false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(update_centers(spec, data, part));
  }
}
BENCHMARK(BM_UpdateCenters)->DenseRange(0, 3);

void BM_Fit(benchmark::State& state) {
  const DataMatrix data = bench_data(80, static_cast<int>(state.range(0)), 4, 5);
  const PenaltySpec spec{PenaltyFamily::HardThreshold, 0.2, false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(data, 4, spec, 10, 6));
  }
}
BENCHMARK(BM_Fit)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_LambdaPath(benchmark::State& state) {
  const DataMatrix data = bench_data(80, 50, 4, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lambda_path(data, 4, {PenaltyFamily::HardThreshold, 0, false},
                    default_lambda_grid(), 10, 8, 1));
  }
}
BENCHMARK(BM_LambdaPath)->Unit(benchmark::kMillisecond);

void BM_AdjustedRandIndex(benchmark::State& state) {
  Rng rng(9);
  const int n = static_cast<int>(state.range(0));
  std::vector<int> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = rng.uniform_int(4);
    b[i] = rng.uniform_int(4);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(adjusted_rand_index(
        std::span<const int>(a), std::span<const int>(b)));
  }
}
BENCHMARK(BM_AdjustedRandIndex)->Arg(150)->Arg(1000);

void BM_ClusteringDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Partition a = bench_partition(n, 4, 10);
  const Partition b = bench_partition(n, 4, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(clustering_distance(a, b));
  }
}
BENCHMARK(BM_ClusteringDistance)->Arg(80)->Arg(800);

}  // namespace

BENCHMARK_MAIN();
