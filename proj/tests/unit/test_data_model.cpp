#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "htkm/data_matrix.hpp"
#include "htkm/simulate.hpp"
#include "test_helpers.hpp"

using namespace htkm;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE("data_model") {

TEST_CASE("load_csv reads a plain 2x2 file") {
  const auto path = write_temp("htkm_t1.csv", "1,2\n3,4\n");
  const DataMatrix data = load_csv(path, false);
  CHECK(data.n() == 2);
  CHECK(data.p() == 2);
  CHECK(data.values(0, 0) == 1.0);
  CHECK(data.values(1, 1) == 4.0);
  CHECK(data.column_names == std::vector<std::string>{"V1", "V2"});
  CHECK_FALSE(data.standardized);
}

TEST_CASE("load_csv takes column names from the header row") {
  const auto path = write_temp("htkm_t2.csv", "a,b\n1,2\n");
  const DataMatrix data = load_csv(path, true);
  CHECK(data.n() == 1);
  CHECK(data.p() == 2);
  CHECK(data.column_names == std::vector<std::string>{"a", "b"});
  CHECK(data.values(0, 0) == 1.0);
  CHECK(data.values(0, 1) == 2.0);
}

TEST_CASE("load_csv names the offending cell on a parse error") {
  const auto path = write_temp("htkm_t3.csv", "1,2\n3,x\n");
  try {
    load_csv(path, false);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("x") != std::string::npos);
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
}

TEST_CASE("load_csv rejects ragged and empty input") {
  CHECK_THROWS_AS(load_csv(write_temp("htkm_t4.csv", "1,2\n3\n"), false),
                  ShapeError);
  CHECK_THROWS_AS(load_csv(write_temp("htkm_t5.csv", ""), false), DataError);
}

TEST_CASE("standardize leaves an already standardized column unchanged") {
  const auto result = standardize(test::column({-1, -1, 1, 1}));
  CHECK(result.dropped_columns.empty());
  CHECK(result.data.standardized);
  for (int i = 0; i < 4; ++i)
    CHECK(result.data.values(i, 0) ==
          doctest::Approx(i < 2 ? -1.0 : 1.0).epsilon(1e-12));
}

TEST_CASE("standardize maps (0,2) to (-1,1) under the 1/n convention") {
  const auto result = standardize(test::column({0, 2}));
  CHECK(result.data.values(0, 0) == doctest::Approx(-1.0));
  CHECK(result.data.values(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("standardize drops constant columns and reports them") {
  auto data = test::matrix_from({{5, 1}, {5, 2}, {5, 4}});
  data.column_names = {"flat", "ok"};
  const auto result = standardize(data);
  CHECK(result.data.p() == 1);
  CHECK(result.data.column_names == std::vector<std::string>{"ok"});
  CHECK(result.dropped_columns == std::vector<std::string>{"flat"});
}

TEST_CASE("standardize rejects all-constant data") {
  CHECK_THROWS_AS(standardize(test::matrix_from({{1, 2}, {1, 2}})),
                  DegenerateDataError);
}

TEST_CASE("standardized columns have mean 0 and second moment 1") {
  const auto data = test::random_standardized(37, 5, 99);
  for (int j = 0; j < data.p(); ++j) {
    const double mean = data.values.col(j).mean();
    const double moment = data.values.col(j).squaredNorm() / data.n();
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(moment - 1.0) < 1e-9);
  }
}

TEST_CASE("csv round trip preserves values bit for bit") {
  const LabeledDataset sim = simulate_dataset({20, 52, 2, 0.6, 77});
  const auto path = fs::temp_directory_path() / "htkm_rt.csv";
  write_csv(sim.data, path, true);
  const DataMatrix back = load_csv(path, true);
  CHECK(back.values == sim.data.values);
  CHECK(back.column_names == sim.data.column_names);
}

TEST_CASE("mean templates match the block displays exactly") {
  // K=2: +/- mu over all 50 informative variables.
  CHECK(mean_template(2, 1) == Eigen::RowVectorXd::Constant(50, 1.0));
  CHECK(mean_template(2, 2) == Eigen::RowVectorXd::Constant(50, -1.0));

  // K=4, label 1: (-1_25, +1_25); labels 2/4 are +/- on all 50.
  const Eigen::RowVectorXd t41 = mean_template(4, 1);
  for (int j = 0; j < 25; ++j) CHECK(t41(j) == -1.0);
  for (int j = 25; j < 50; ++j) CHECK(t41(j) == 1.0);
  CHECK(mean_template(4, 2) == Eigen::RowVectorXd::Constant(50, 1.0));
  const Eigen::RowVectorXd t43 = mean_template(4, 3);
  for (int j = 0; j < 25; ++j) CHECK(t43(j) == 1.0);
  for (int j = 25; j < 50; ++j) CHECK(t43(j) == -1.0);
  CHECK(mean_template(4, 4) == Eigen::RowVectorXd::Constant(50, -1.0));

  // K=8: sign blocks of 17/17/16, first block + for labels 1..4.
  for (int lab = 1; lab <= 8; ++lab) {
    const Eigen::RowVectorXd t = mean_template(8, lab);
    const double s1 = lab <= 4 ? 1.0 : -1.0;
    const double s2 = ((lab - 1) % 2 == 0) ? 1.0 : -1.0;
    const double s3 = ((lab - 1) / 2 % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < 17; ++j) CHECK(t(j) == s1);
    for (int j = 17; j < 34; ++j) CHECK(t(j) == s2);
    for (int j = 34; j < 50; ++j) CHECK(t(j) == s3);
  }
}

TEST_CASE("simulate_dataset is bit-identical for equal configs") {
  const SimConfig cfg{60, 55, 4, 0.5, 12345};
  const LabeledDataset a = simulate_dataset(cfg);
  const LabeledDataset b = simulate_dataset(cfg);
  CHECK(a.labels == b.labels);
  CHECK(a.data.values == b.data.values);
}

TEST_CASE("simulate_dataset informative column means land in the 3-sigma band") {
  const LabeledDataset sim = simulate_dataset({80, 50, 2, 0.8, 4242});
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < sim.data.n(); ++i) {
    if (sim.labels[i] == 1) {
      sum += sim.data.values(i, 0);
      ++count;
    }
  }
  REQUIRE(count > 0);
  const double mean = sum / count;
  CHECK(std::abs(mean - 0.8) <= 3.0 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("simulate_dataset noise columns have near-zero mean") {
  const LabeledDataset sim = simulate_dataset({200, 60, 4, 0.8, 7});
  const double mean = sim.data.values.col(59).mean();
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(200.0));
}

TEST_CASE("simulate_dataset validates its configuration") {
  CHECK_THROWS_AS(simulate_dataset({80, 50, 3, 0.8, 0}), ConfigError);
  CHECK_THROWS_AS(simulate_dataset({80, 49, 2, 0.8, 0}), ConfigError);
}

TEST_CASE("label csv round trip") {
  const auto path = fs::temp_directory_path() / "htkm_labels.csv";
  const std::vector<int> labels{1, 2, 2, 3, 1};
  write_labels_csv(labels, path);
  CHECK(load_labels_csv(path) == labels);
}

}  // TEST_SUITE
