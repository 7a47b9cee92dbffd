#include "htkm/simulate.hpp"

#include "htkm/rng.hpp"

namespace htkm {

namespace {
constexpr int kInformative = 50;
}

Eigen::RowVectorXd mean_template(int k_clusters, int label) {
  if (label < 1 || label > k_clusters)
    throw ConfigError("mean_template: label out of range");
  Eigen::RowVectorXd m(kInformative);
  switch (k_clusters) {
    case 2:
      m.setConstant(label == 1 ? 1.0 : -1.0);
      break;
    case 4:
      switch (label) {
        case 1:
          m.head(25).setConstant(-1.0);
          m.tail(25).setConstant(1.0);
          break;
        case 2:
          m.setConstant(1.0);
          break;
        case 3:
          m.head(25).setConstant(1.0);
          m.tail(25).setConstant(-1.0);
          break;
        default:
          m.setConstant(-1.0);
      }
      break;
    case 8: {
      // Sign blocks of sizes 17/17/16; labels 1..8 enumerate
      // (+,+,+), (+,-,+), (+,+,-), (+,-,-), (-,+,+), (-,-,+), (-,+,-), (-,-,-).
      static constexpr int signs[8][3] = {{+1, +1, +1}, {+1, -1, +1},
                                          {+1, +1, -1}, {+1, -1, -1},
                                          {-1, +1, +1}, {-1, -1, +1},
                                          {-1, +1, -1}, {-1, -1, -1}};
      const int* s = signs[label - 1];
      m.segment(0, 17).setConstant(static_cast<double>(s[0]));
      m.segment(17, 17).setConstant(static_cast<double>(s[1]));
      m.segment(34, 16).setConstant(static_cast<double>(s[2]));
      break;
    }
    default:
      throw ConfigError("mean_template: unsupported cluster count " +
                        std::to_string(k_clusters) + " (expected 2, 4 or 8)");
  }
  return m;
}

LabeledDataset simulate_dataset(const SimConfig& cfg) {
  if (cfg.k != 2 && cfg.k != 4 && cfg.k != 8)
    throw ConfigError("simulate_dataset: K must be 2, 4 or 8");
  if (cfg.p < kInformative)
    throw ConfigError("simulate_dataset: p must be at least 50");
  if (cfg.n < 1) throw ConfigError("simulate_dataset: n must be positive");
  if (cfg.mu <= 0.0) throw ConfigError("simulate_dataset: mu must be positive");

  Rng label_rng(derive_seed(cfg.seed, 1));
  Rng signal_rng(derive_seed(cfg.seed, 2));
  Rng noise_rng(derive_seed(cfg.seed, 3));

  std::vector<int> labels(cfg.n);
  for (int i = 0; i < cfg.n; ++i) labels[i] = 1 + label_rng.uniform_int(cfg.k);

  Eigen::MatrixXd values(cfg.n, cfg.p);
  std::vector<Eigen::RowVectorXd> templates(cfg.k);
  for (int lab = 1; lab <= cfg.k; ++lab)
    templates[lab - 1] = cfg.mu * mean_template(cfg.k, lab);

  for (int i = 0; i < cfg.n; ++i) {
    const Eigen::RowVectorXd& mean = templates[labels[i] - 1];
    for (int j = 0; j < kInformative; ++j)
      values(i, j) = mean(j) + signal_rng.normal();
  }
  for (int i = 0; i < cfg.n; ++i) {
    for (int j = kInformative; j < cfg.p; ++j)
      values(i, j) = noise_rng.normal();
  }

  return LabeledDataset{make_data_matrix(std::move(values), {}, false),
                        std::move(labels)};
}

}  // namespace htkm
