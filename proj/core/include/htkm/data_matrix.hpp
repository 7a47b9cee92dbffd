#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "htkm/error.hpp"

namespace htkm {

/// Observation matrix with n rows (observations) and p columns (variables).
/// Immutable by convention once constructed.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;  // size p
  bool standardized = false;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }
};

/// Builds a DataMatrix, validating shape and finiteness. Missing names are
/// filled as V1..Vp.
DataMatrix make_data_matrix(Eigen::MatrixXd values,
                            std::vector<std::string> column_names = {},
                            bool standardized = false);

/// Reads a rectangular comma-separated numeric file. With has_header the
/// first row provides column names, otherwise names default to V1..Vp.
DataMatrix load_csv(const std::filesystem::path& path, bool has_header);

/// Writes the matrix as CSV. Values are printed in shortest exact form so
/// a load_csv round trip reproduces the matrix bit for bit.
void write_csv(const DataMatrix& data, const std::filesystem::path& path,
               bool header = true);

struct StandardizeResult {
  DataMatrix data;
  std::vector<std::string> dropped_columns;  // zero-variance columns
};

/// Centers every column to mean 0 and scales to unit second moment,
/// (1/n) sum x_ij^2 = 1 (population convention). Zero-variance columns are
/// dropped and reported in the result.
StandardizeResult standardize(const DataMatrix& data);

/// New DataMatrix restricted to the given column indices (0-based).
DataMatrix select_columns(const DataMatrix& data, std::span<const int> cols);

/// New DataMatrix with rows data.values.row(idx[i]); duplicates allowed
/// (bootstrap resampling).
DataMatrix select_rows(const DataMatrix& data, std::span<const int> rows);

/// Order-sensitive 64-bit FNV-1a hash over dimensions and raw value bits.
std::uint64_t data_fingerprint(const DataMatrix& data);

/// One integer label per line.
std::vector<int> load_labels_csv(const std::filesystem::path& path);
void write_labels_csv(std::span<const int> labels,
                      const std::filesystem::path& path);

}  // namespace htkm
