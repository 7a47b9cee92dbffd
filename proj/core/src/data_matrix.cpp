#include "htkm/data_matrix.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace htkm {

namespace {

std::vector<std::string> default_names(int p) {
  std::vector<std::string> names(p);
  for (int j = 0; j < p; ++j) names[j] = "V" + std::to_string(j + 1);
  return names;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_cell(const std::string& field, int row, int col) {
  std::size_t begin = field.find_first_not_of(" \t");
  if (begin == std::string::npos)
    throw ParseError("empty cell at row " + std::to_string(row) + ", column " +
                     std::to_string(col));
  std::size_t end = field.find_last_not_of(" \t") + 1;
  double value = 0.0;
  const char* first = field.data() + begin;
  const char* last = field.data() + end;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw ParseError("cannot parse cell \"" + field.substr(begin, end - begin) +
                     "\" at row " + std::to_string(row) + ", column " +
                     std::to_string(col));
  return value;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

DataMatrix make_data_matrix(Eigen::MatrixXd values,
                            std::vector<std::string> column_names,
                            bool standardized) {
  if (values.rows() < 1 || values.cols() < 1)
    throw ShapeError("data matrix must have at least one row and one column");
  if (!values.allFinite())
    throw DataError("data matrix contains non-finite entries");
  if (column_names.empty()) {
    column_names = default_names(static_cast<int>(values.cols()));
  } else if (static_cast<int>(column_names.size()) != values.cols()) {
    throw ShapeError("column name count does not match column count");
  }
  return DataMatrix{std::move(values), std::move(column_names), standardized};
}

DataMatrix load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw DataError("empty input file: " + path.string());

  std::vector<std::string> names;
  std::size_t first_data = 0;
  if (has_header) {
    names = split_line(lines[0], ',');
    first_data = 1;
    if (lines.size() == first_data)
      throw DataError("no data rows below header in " + path.string());
  }

  const int n = static_cast<int>(lines.size() - first_data);
  const auto first_fields = split_line(lines[first_data], ',');
  const int p = static_cast<int>(first_fields.size());
  if (has_header && static_cast<int>(names.size()) != p)
    throw ShapeError("header has " + std::to_string(names.size()) +
                     " fields but data rows have " + std::to_string(p));

  Eigen::MatrixXd values(n, p);
  for (int i = 0; i < n; ++i) {
    const auto fields = split_line(lines[first_data + i], ',');
    if (static_cast<int>(fields.size()) != p)
      throw ShapeError("row " + std::to_string(i + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(p));
    for (int j = 0; j < p; ++j) {
      values(i, j) = parse_cell(fields[j], i + 1, j + 1);
    }
  }
  return make_data_matrix(std::move(values), std::move(names), false);
}

void write_csv(const DataMatrix& data, const std::filesystem::path& path,
               bool header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  if (header) {
    for (int j = 0; j < data.p(); ++j) {
      if (j) out << ',';
      out << data.column_names[j];
    }
    out << '\n';
  }
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) {
      if (j) out << ',';
      out << format_double(data.values(i, j));
    }
    out << '\n';
  }
}

StandardizeResult standardize(const DataMatrix& data) {
  const int n = data.n();
  if (n < 2) throw DataError("standardize requires at least 2 rows");

  std::vector<int> keep;
  std::vector<std::string> dropped;
  Eigen::VectorXd mean(data.p()), sd(data.p());
  for (int j = 0; j < data.p(); ++j) {
    const double m = data.values.col(j).mean();
    const double var =
        (data.values.col(j).array() - m).square().sum() / static_cast<double>(n);
    if (var <= 0.0) {
      dropped.push_back(data.column_names[j]);
    } else {
      mean(j) = m;
      sd(j) = std::sqrt(var);
      keep.push_back(j);
    }
  }
  if (keep.empty())
    throw DegenerateDataError("all columns have zero variance");

  Eigen::MatrixXd out(n, keep.size());
  std::vector<std::string> names(keep.size());
  for (std::size_t jj = 0; jj < keep.size(); ++jj) {
    const int j = keep[jj];
    out.col(jj) = (data.values.col(j).array() - mean(j)) / sd(j);
    names[jj] = data.column_names[j];
  }
  return StandardizeResult{make_data_matrix(std::move(out), std::move(names), true),
                           std::move(dropped)};
}

DataMatrix select_columns(const DataMatrix& data, std::span<const int> cols) {
  if (cols.empty()) throw ShapeError("select_columns: empty column set");
  Eigen::MatrixXd out(data.n(), cols.size());
  std::vector<std::string> names(cols.size());
  for (std::size_t jj = 0; jj < cols.size(); ++jj) {
    const int j = cols[jj];
    if (j < 0 || j >= data.p())
      throw ShapeError("select_columns: index out of range");
    out.col(jj) = data.values.col(j);
    names[jj] = data.column_names[j];
  }
  return DataMatrix{std::move(out), std::move(names), data.standardized};
}

DataMatrix select_rows(const DataMatrix& data, std::span<const int> rows) {
  if (rows.empty()) throw ShapeError("select_rows: empty row set");
  Eigen::MatrixXd out(rows.size(), data.p());
  for (std::size_t ii = 0; ii < rows.size(); ++ii) {
    const int i = rows[ii];
    if (i < 0 || i >= data.n())
      throw ShapeError("select_rows: index out of range");
    out.row(ii) = data.values.row(i);
  }
  return DataMatrix{std::move(out), data.column_names, data.standardized};
}

std::uint64_t data_fingerprint(const DataMatrix& data) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(data.n()));
  mix(static_cast<std::uint64_t>(data.p()));
  mix(data.standardized ? 1 : 0);
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) {
      std::uint64_t bits;
      const double v = data.values(i, j);
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      mix(bits);
    }
  }
  return h;
}

std::vector<int> load_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<int> labels;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    int value = 0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    while (ptr != last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
    if (ec != std::errc() || ptr != last)
      throw ParseError("cannot parse label \"" + line + "\" at row " +
                       std::to_string(row));
    labels.push_back(value);
  }
  if (labels.empty()) throw DataError("empty label file: " + path.string());
  return labels;
}

void write_labels_csv(std::span<const int> labels,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  for (int lab : labels) out << lab << '\n';
}

}  // namespace htkm
