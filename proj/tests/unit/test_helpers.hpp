#pragma once

#include <Eigen/Dense>
#include <vector>

#include "htkm/data_matrix.hpp"
#include "htkm/partition.hpp"
#include "htkm/rng.hpp"

namespace test {

inline htkm::DataMatrix matrix_from(
    std::initializer_list<std::initializer_list<double>> rows,
    bool standardized = false) {
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(rows.begin()->size());
  Eigen::MatrixXd values(n, p);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) values(i, j++) = v;
    ++i;
  }
  return htkm::make_data_matrix(std::move(values), {}, standardized);
}

inline htkm::DataMatrix column(std::initializer_list<double> values,
                               bool standardized = false) {
  Eigen::MatrixXd m(values.size(), 1);
  int i = 0;
  for (double v : values) m(i++, 0) = v;
  return htkm::make_data_matrix(std::move(m), {}, standardized);
}

inline htkm::Partition part_of(std::initializer_list<int> labels_1based,
                               int k) {
  htkm::Partition part;
  part.k = k;
  for (int lab : labels_1based) part.labels.push_back(lab - 1);
  return part;
}

inline htkm::DataMatrix random_standardized(int n, int p, std::uint64_t seed) {
  htkm::Rng rng(seed);
  Eigen::MatrixXd values(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) values(i, j) = rng.normal();
  auto data = htkm::make_data_matrix(std::move(values));
  return htkm::standardize(data).data;
}

inline htkm::Partition random_partition(int n, int k, htkm::Rng& rng) {
  htkm::Partition part;
  part.k = k;
  part.labels.resize(n);
  for (;;) {
    for (int i = 0; i < n; ++i) part.labels[i] = rng.uniform_int(k);
    std::vector<int> counts(k, 0);
    for (int lab : part.labels) ++counts[lab];
    bool ok = true;
    for (int c : counts) ok &= (c > 0);
    if (ok) return part;
  }
}

/// Independent adjusted-Rand oracle built from explicit pair counts, used
/// to freeze expected values for the main implementation.
inline double ari_pair_oracle(const std::vector<int>& a,
                              const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  double both = 0, only_a = 0, only_b = 0, neither = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      if (sa && sb) ++both;
      else if (sa) ++only_a;
      else if (sb) ++only_b;
      else ++neither;
    }
  }
  const double num = 2.0 * (both * neither - only_a * only_b);
  const double den = (both + only_a) * (only_a + neither) +
                     (both + only_b) * (only_b + neither);
  if (den == 0.0) return 1.0;
  return num / den;
}

}  // namespace test
