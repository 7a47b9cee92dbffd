// Command-line interface: fit, path, select, simulate, score.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "htkm/json_io.hpp"
#include "htkm/selection.hpp"
#include "htkm/simulate.hpp"
#include "htkm/solver.hpp"

namespace {

using namespace htkm;

struct CommonOptions {
  std::string input;
  bool no_header = false;
  int k = 2;
  std::string family = "ht";
  bool adaptive = false;
  int nstart = 10;
  std::uint64_t seed = 42;
  bool no_standardize = false;
  int threads = 0;  // 0 = resolve from HTKM_THREADS or hardware
};

struct GridOptions {
  double min_exp = -2.0;
  double max_exp = 1.9;
  int length = 40;
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HTKM_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<double> build_grid(const GridOptions& grid) {
  if (grid.length < 1) throw ConfigError("grid length must be >= 1");
  if (grid.length > 1 && grid.max_exp <= grid.min_exp)
    throw ConfigError("grid max exponent must exceed the min exponent");
  std::vector<double> lambdas;
  lambdas.reserve(grid.length + 1);
  for (int i = grid.length - 1; i >= 0; --i) {
    const double e =
        grid.length == 1
            ? grid.min_exp
            : grid.min_exp + (grid.max_exp - grid.min_exp) * i / (grid.length - 1);
    lambdas.push_back(std::pow(10.0, e));
  }
  lambdas.push_back(0.0);
  return lambdas;
}

DataMatrix load_input(const CommonOptions& opt) {
  DataMatrix data = load_csv(opt.input, !opt.no_header);
  if (opt.no_standardize) return data;
  StandardizeResult result = standardize(data);
  if (!result.dropped_columns.empty()) {
    std::cerr << "warning: dropped zero-variance column(s):";
    for (const auto& name : result.dropped_columns) std::cerr << ' ' << name;
    std::cerr << '\n';
  }
  return std::move(result.data);
}

PenaltySpec base_spec(const CommonOptions& opt) {
  PenaltySpec spec;
  spec.family = penalty_family_from_string(opt.family);
  spec.adaptive = opt.adaptive;
  return spec;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_family = true) {
  cmd->add_option("--input", opt.input, "Input CSV file")->required();
  cmd->add_flag("--no-header", opt.no_header,
                "Input has no header row (names default to V1..Vp)");
  cmd->add_option("--k", opt.k, "Number of clusters")->required();
  if (with_family) {
    cmd->add_option("--family", opt.family,
                    "Penalty family: ht, lasso, ridge, glasso")
        ->default_val("ht");
    cmd->add_flag("--adaptive", opt.adaptive, "Adaptive per-column penalty");
  }
  cmd->add_option("--nstart", opt.nstart, "Extra random starts per fit")
      ->default_val(10);
  cmd->add_option("--seed", opt.seed, "Master seed")->default_val(42);
  cmd->add_flag("--no-standardize", opt.no_standardize,
                "Skip standardization (the penalties assume standardized data)");
  cmd->add_option("--threads", opt.threads,
                  "Worker threads (default: HTKM_THREADS or hardware)");
}

void add_grid(CLI::App* cmd, GridOptions& grid) {
  cmd->add_option("--grid-min-exp", grid.min_exp,
                  "Smallest positive lambda = 10^min_exp")
      ->default_val(-2.0);
  cmd->add_option("--grid-max-exp", grid.max_exp, "Largest lambda = 10^max_exp")
      ->default_val(1.9);
  cmd->add_option("--grid-length", grid.length,
                  "Number of positive grid points (0 is appended)")
      ->default_val(40);
}

void print_convergence_warnings(const PathResult& path) {
  int stuck = 0;
  for (const FitResult& fit : path.fits) stuck += fit.converged ? 0 : 1;
  if (stuck > 0)
    std::cerr << "warning: " << stuck
              << " grid point(s) hit the iteration cap before the partition "
                 "stabilized\n";
}

int run_fit(const CommonOptions& opt, double lambda, const std::string& out,
            const std::string& assign_out) {
  DataMatrix data = load_input(opt);
  PenaltySpec spec = base_spec(opt);
  spec.lambda = lambda;
  const FitResult result = fit(data, opt.k, spec, opt.nstart, opt.seed);
  if (!result.converged)
    std::cerr << "warning: fit hit the iteration cap before the partition "
                 "stabilized\n";
  write_text_file(to_json_string(result), out);
  std::vector<int> labels(result.partition.labels);
  for (int& lab : labels) ++lab;
  write_labels_csv(labels, assign_out);
  return 0;
}

int run_path(const CommonOptions& opt, const GridOptions& grid,
             const std::string& out, const std::string& norms_out) {
  DataMatrix data = load_input(opt);
  const PathResult path =
      lambda_path(data, opt.k, base_spec(opt), build_grid(grid), opt.nstart,
                  opt.seed, resolve_threads(opt.threads));
  print_convergence_warnings(path);
  write_text_file(to_json_string(path), out);
  if (!norms_out.empty())
    write_text_file(path_norms_tsv(path, data), norms_out);
  return 0;
}

int run_select(const CommonOptions& opt, const GridOptions& grid,
               const std::string& method_name, int B, int S, double c,
               const std::string& out, const std::string& assign_out) {
  DataMatrix data = load_input(opt);
  const SelectionMethod method = selection_method_from_string(method_name);
  const std::vector<double> lambdas = build_grid(grid);
  const int threads = resolve_threads(opt.threads);

  SelectionReport report;
  switch (method) {
    case SelectionMethod::Aic:
    case SelectionMethod::Bic:
    case SelectionMethod::Gap1:
    case SelectionMethod::Gap2: {
      const PathResult path = lambda_path(data, opt.k, base_spec(opt), lambdas,
                                          opt.nstart, opt.seed, threads);
      print_convergence_warnings(path);
      if (method == SelectionMethod::Aic) {
        report = aic(path, data);
      } else if (method == SelectionMethod::Bic) {
        report = bic(path, data);
      } else {
        const GapVariant variant = method == SelectionMethod::Gap1
                                       ? GapVariant::Gap1
                                       : GapVariant::Gap2;
        report = select_gap(path, data, variant, c, S, opt.seed);
      }
      break;
    }
    case SelectionMethod::Stab1:
    case SelectionMethod::Stab2:
    case SelectionMethod::Stab3: {
      const StabScheme scheme = method == SelectionMethod::Stab1
                                    ? StabScheme::Stab1
                                : method == SelectionMethod::Stab2
                                    ? StabScheme::Stab2
                                    : StabScheme::Stab3;
      report = select_stability(data, opt.k, base_spec(opt), lambdas, scheme, B,
                                opt.seed, opt.nstart, threads);
      for (const StabilityPoint& pt : report.stability) {
        if (pt.used_replications < B)
          std::cerr << "warning: lambda " << pt.lambda << " used only "
                    << pt.used_replications << " of " << B
                    << " replications (validation sets too small)\n";
      }
      break;
    }
  }
  write_text_file(to_json_string(report), out);
  std::vector<int> labels(report.chosen_fit.partition.labels);
  for (int& lab : labels) ++lab;
  write_labels_csv(labels, assign_out);
  return 0;
}

int run_simulate(int n, int p, int k, double mu, std::uint64_t seed,
                 const std::string& data_out, const std::string& labels_out) {
  const LabeledDataset sim = simulate_dataset({n, p, k, mu, seed});
  write_csv(sim.data, data_out, true);
  write_labels_csv(sim.labels, labels_out);
  return 0;
}

int run_score(const std::string& path_a, const std::string& path_b) {
  const std::vector<int> a = load_labels_csv(path_a);
  const std::vector<int> b = load_labels_csv(path_b);
  const double value = adjusted_rand_index(std::span<const int>(a),
                                           std::span<const int>(b));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  std::cout << buf << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized K-means clustering with hard-thresholding and "
               "related penalties"};
  app.require_subcommand(1);

  CommonOptions opt;
  GridOptions grid;
  double lambda = 0.0;
  std::string out, assign_out, norms_out, method, sim_data_out, sim_labels_out;
  std::string score_a, score_b;
  int B = 20, S = 50;
  double c = 1.0;
  int sim_n = 80, sim_p = 50, sim_k = 2;
  double sim_mu = 0.8;
  std::uint64_t sim_seed = 42;

  CLI::App* fit_cmd = app.add_subcommand("fit", "Single fit at a fixed lambda");
  add_common(fit_cmd, opt);
  fit_cmd->add_option("--lambda", lambda, "Penalty strength")->default_val(0.0);
  fit_cmd->add_option("--out", out, "FitResult JSON path")
      ->default_val("fit_result.json");
  fit_cmd->add_option("--assign-out", assign_out, "Assignment CSV path")
      ->default_val("assignment.csv");

  CLI::App* path_cmd =
      app.add_subcommand("path", "Regularization path over a lambda grid");
  add_common(path_cmd, opt);
  add_grid(path_cmd, grid);
  path_cmd->add_option("--out", out, "PathResult JSON path")
      ->default_val("path_result.json");
  path_cmd->add_option("--norms-out", norms_out,
                       "TSV of per-lambda center column norms for path plots")
      ->default_val("path_norms.tsv");

  CLI::App* select_cmd =
      app.add_subcommand("select", "Tuning-parameter selection over a grid");
  add_common(select_cmd, opt);
  add_grid(select_cmd, grid);
  select_cmd
      ->add_option("--method", method,
                   "aic, bic, gap1, gap2, stab1, stab2 or stab3")
      ->required();
  select_cmd->add_option("--B", B, "Bootstrap replications (stab methods)")
      ->default_val(20);
  select_cmd->add_option("--S", S, "Permutations per step (gap methods)")
      ->default_val(50);
  select_cmd->add_option("--c", c, "gap2 tolerance in permutation sds")
      ->default_val(1.0);
  select_cmd->add_option("--out", out, "SelectionReport JSON path")
      ->default_val("selection.json");
  select_cmd->add_option("--assign-out", assign_out,
                         "Chosen assignment CSV path")
      ->default_val("assignment.csv");

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Synthetic Gaussian benchmark data");
  sim_cmd->add_option("--n", sim_n, "Observations")->default_val(80);
  sim_cmd->add_option("--p", sim_p, "Variables (first 50 informative)")
      ->default_val(50);
  sim_cmd->add_option("--k", sim_k, "Clusters (2, 4 or 8)")->default_val(2);
  sim_cmd->add_option("--mu", sim_mu, "Cluster separation")->default_val(0.8);
  sim_cmd->add_option("--seed", sim_seed, "Master seed")->default_val(42);
  sim_cmd->add_option("--data-out", sim_data_out, "Data CSV path")
      ->default_val("simulated.csv");
  sim_cmd->add_option("--labels-out", sim_labels_out, "Labels CSV path")
      ->default_val("simulated_labels.csv");

  CLI::App* score_cmd =
      app.add_subcommand("score", "Adjusted Rand index of two label files");
  score_cmd->add_option("--a", score_a, "First labels CSV")->required();
  score_cmd->add_option("--b", score_b, "Second labels CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(opt, lambda, out, assign_out);
    if (path_cmd->parsed()) return run_path(opt, grid, out, norms_out);
    if (select_cmd->parsed())
      return run_select(opt, grid, method, B, S, c, out, assign_out);
    if (sim_cmd->parsed())
      return run_simulate(sim_n, sim_p, sim_k, sim_mu, sim_seed, sim_data_out,
                          sim_labels_out);
    if (score_cmd->parsed()) return run_score(score_a, score_b);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
