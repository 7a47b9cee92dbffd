#include "htkm/json_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace htkm {

namespace {

using nlohmann::json;

json one_based(const std::vector<int>& indices) {
  json arr = json::array();
  for (int v : indices) arr.push_back(v + 1);
  return arr;
}

json centers_row_major(const Eigen::MatrixXd& centers) {
  json arr = json::array();
  for (int i = 0; i < centers.rows(); ++i)
    for (int j = 0; j < centers.cols(); ++j) arr.push_back(centers(i, j));
  return arr;
}

json fit_to_json(const FitResult& fit) {
  json j;
  j["lambda"] = fit.lambda;
  j["family"] = to_string(fit.family);
  j["adaptive"] = fit.adaptive;
  j["objective"] = fit.objective;
  j["wcss"] = fit.wcss;
  j["active_set"] = one_based(fit.active_set);
  j["k"] = fit.partition.k;
  j["p"] = static_cast<int>(fit.centers.cols());
  j["centers"] = centers_row_major(fit.centers);
  j["assignment"] = one_based(fit.partition.labels);
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  return j;
}

std::string fingerprint_hex(std::uint64_t fp) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fp;
  return os.str();
}

}  // namespace

std::string to_json_string(const FitResult& fit) {
  return fit_to_json(fit).dump(2) + "\n";
}

std::string to_json_string(const PathResult& path) {
  json j;
  j["family"] = to_string(path.family);
  j["adaptive"] = path.adaptive;
  j["k"] = path.k;
  j["data_fingerprint"] = fingerprint_hex(path.fingerprint);
  j["grid"] = path.grid;
  json fits = json::array();
  for (const FitResult& fit : path.fits) fits.push_back(fit_to_json(fit));
  j["fits"] = std::move(fits);
  return j.dump(2) + "\n";
}

std::string to_json_string(const SelectionReport& report) {
  json j;
  j["method"] = to_string(report.method);
  j["grid"] = report.grid;
  j["scores"] = report.scores;  // NaN serializes as null
  j["chosen_lambda"] = report.chosen_lambda;
  j["chosen_active_set"] = one_based(report.chosen_fit.active_set);
  j["chosen_assignment"] = one_based(report.chosen_fit.partition.labels);
  j["chosen_fit"] = fit_to_json(report.chosen_fit);

  json diag;
  if (!report.gap_steps.empty()) {
    json steps = json::array();
    for (const GapStep& step : report.gap_steps) {
      json s;
      s["lambda"] = step.lambda;
      s["from_set"] = one_based(step.from_set);
      s["to_set"] = one_based(step.to_set);
      s["entering"] = one_based(step.entering);
      s["dropped"] = one_based(step.dropped);
      s["delta"] = step.delta;
      s["m"] = step.m;
      s["s"] = step.s;
      s["d"] = step.d;
      s["valid"] = step.valid;
      steps.push_back(std::move(s));
    }
    diag["gap_steps"] = std::move(steps);
  }
  if (!report.stability.empty()) {
    json points = json::array();
    for (const StabilityPoint& pt : report.stability) {
      json s;
      s["lambda"] = pt.lambda;
      s["instability"] = pt.instability;
      s["used_replications"] = pt.used_replications;
      s["degenerate"] = pt.degenerate;
      points.push_back(std::move(s));
    }
    diag["stability"] = std::move(points);
  }
  if (!report.wcss_all.empty()) {
    diag["wcss_all"] = report.wcss_all;
    diag["active_counts"] = report.active_counts;
  }
  j["diagnostics"] = std::move(diag);
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& text,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << text;
}

std::string path_norms_tsv(const PathResult& path, const DataMatrix& data) {
  std::ostringstream os;
  os << "lambda";
  for (const std::string& name : data.column_names) os << '\t' << name;
  os << '\n';
  for (std::size_t i = 0; i < path.fits.size(); ++i) {
    const Eigen::VectorXd norms = center_column_norms(path.fits[i].centers);
    char buf[32];
    auto put = [&](double v) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      (void)ec;
      os.write(buf, ptr - buf);
    };
    put(path.grid[i]);
    for (int j = 0; j < norms.size(); ++j) {
      os << '\t';
      put(norms(j));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace htkm
