#include "htkm/metrics.hpp"

#include <map>

namespace htkm {

double wcss(const DataMatrix& data, const Eigen::MatrixXd& centers,
            const Partition& part) {
  const int n = data.n();
  if (part.n() != n) throw ShapeError("wcss: assignment length != n");
  if (centers.cols() != data.values.cols())
    throw ShapeError("wcss: center and data column counts differ");
  if (part.k > centers.rows())
    throw ShapeError("wcss: partition references more clusters than centers");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += (data.values.row(i) - centers.row(part.labels[i])).squaredNorm();
  }
  return total / static_cast<double>(n);
}

double penalized_objective(const DataMatrix& data,
                           const Eigen::MatrixXd& centers,
                           const Partition& part, const PenaltySpec& spec) {
  if (spec.lambda < 0.0)
    throw ConfigError("penalized_objective: lambda must be >= 0");
  return wcss(data, centers, part) +
         spec.lambda * penalty_value(spec, centers);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  const std::size_t n = a.size();
  if (n != b.size())
    throw ShapeError("adjusted_rand_index: label vectors differ in length");
  if (n < 2) throw ShapeError("adjusted_rand_index: need at least 2 points");

  // Contingency table over the labels that actually occur.
  std::map<int, int> amap, bmap;
  for (int v : a) amap.emplace(v, 0);
  for (int v : b) bmap.emplace(v, 0);
  int ka = 0, kb = 0;
  for (auto& [key, idx] : amap) idx = ka++;
  for (auto& [key, idx] : bmap) idx = kb++;

  std::vector<double> table(static_cast<std::size_t>(ka) * kb, 0.0);
  std::vector<double> arow(ka, 0.0), bcol(kb, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int ia = amap[a[i]];
    const int ib = bmap[b[i]];
    table[static_cast<std::size_t>(ia) * kb + ib] += 1.0;
    arow[ia] += 1.0;
    bcol[ib] += 1.0;
  }

  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_cells = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (double v : table) sum_cells += choose2(v);
  for (double v : arow) sum_a += choose2(v);
  for (double v : bcol) sum_b += choose2(v);
  const double total_pairs = choose2(static_cast<double>(n));

  const double expected = sum_a * sum_b / total_pairs;
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) {
    // Both partitions trivial (all points together or all apart): treat a
    // perfect match as agreement 1.
    return 1.0;
  }
  return (sum_cells - expected) / (maximum - expected);
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  return adjusted_rand_index(std::span<const int>(a.labels),
                             std::span<const int>(b.labels));
}

Eigen::VectorXd center_column_norms(const Eigen::MatrixXd& centers) {
  return centers.colwise().norm();
}

}  // namespace htkm
