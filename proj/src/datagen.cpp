#include "l0fa/datagen.hpp"

#include <cmath>
#include <random>
#include <string>

#include "l0fa/errors.hpp"

namespace l0fa {

void GeneratorConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& rule) {
    throw Error(ErrorKind::InvalidConfig, field + " must be " + rule);
  };
  if (p < 2) bad("p", "at least 2");
  if (r < 1 || r >= p) bad("r", "in [1, p)");
  if (!(density > 0.0 && density <= 1.0)) bad("density", "in (0, 1]");
  if (!(snr > 0.0) || !std::isfinite(snr)) bad("snr", "positive");
  if (!(offdiag_min > 0.0 && offdiag_max >= offdiag_min)) bad("offdiag_min/offdiag_max", "0 < min <= max");
  if (!(diag_margin > 0.0)) bad("diag_margin", "positive");
}

GroundTruth generate_ground_truth(const GeneratorConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  GroundTruth truth;
  truth.r = cfg.r;
  truth.seed = cfg.seed;

  do {
    truth.Gamma = Eigen::MatrixXd::NullaryExpr(cfg.p, cfg.r, [&] { return normal(rng); });
  } while (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(truth.Gamma).rank() < cfg.r);

  std::bernoulli_distribution keep(cfg.density);
  std::uniform_real_distribution<double> magnitude(cfg.offdiag_min, cfg.offdiag_max);
  std::bernoulli_distribution positive(0.5);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(cfg.p, cfg.p);
  bool any_offdiag = false;
  for (int i = 0; i < cfg.p; ++i) {
    for (int j = i + 1; j < cfg.p; ++j) {
      if (keep(rng)) {
        const double v = (positive(rng) ? 1.0 : -1.0) * magnitude(rng);
        S(i, j) = S(j, i) = v;
        any_offdiag = true;
      }
    }
  }
  if (!any_offdiag) {
    // the model asks for correlated noise; force one pair
    std::uniform_int_distribution<int> pick(0, cfg.p - 1);
    const int i = pick(rng);
    int j = pick(rng);
    while (j == i) j = pick(rng);
    const double v = (positive(rng) ? 1.0 : -1.0) * magnitude(rng);
    S(i, j) = S(j, i) = v;
  }
  for (int i = 0; i < cfg.p; ++i) S(i, i) = S.row(i).cwiseAbs().sum() + cfg.diag_margin;

  const Eigen::MatrixXd L_hat = truth.L_hat();
  S *= L_hat.norm() / (cfg.snr * S.norm());
  truth.S_hat = S;
  truth.Sigma_hat = L_hat + S;
  truth.support_mask = (S.array() != 0.0).matrix();
  return truth;
}

GroundTruth generate_ground_truth(int p, int r, double density, double snr, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.p = p;
  cfg.r = r;
  cfg.density = density;
  cfg.snr = snr;
  cfg.seed = seed;
  return generate_ground_truth(cfg);
}

Eigen::MatrixXd sample_observations(const Eigen::MatrixXd& Gamma, const Eigen::MatrixXd& S_hat, int N,
                                    std::uint64_t seed) {
  if (N < 1) throw Error(ErrorKind::InvalidConfig, "N must be at least 1");
  const auto p = S_hat.rows();
  if (Gamma.rows() != p) throw Error(ErrorKind::Shape, "Gamma and S_hat disagree on p");
  Eigen::LLT<Eigen::MatrixXd> llt(S_hat);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::InfeasibleData, "noise covariance is not positive definite");
  }
  const Eigen::MatrixXd W = llt.matrixL();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Y(N, p);
  Eigen::VectorXd u(Gamma.cols());
  Eigen::VectorXd z(p);
  for (int n = 0; n < N; ++n) {
    for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = normal(rng);
    for (Eigen::Index k = 0; k < p; ++k) z[k] = normal(rng);
    Y.row(n) = (Gamma * u + W * z).transpose();
  }
  return Y;
}

Eigen::MatrixXd sample_observations(const GroundTruth& truth, int N, std::uint64_t seed) {
  return sample_observations(truth.Gamma, truth.S_hat, N, seed);
}

double gaussian_kl(const Eigen::MatrixXd& model, const Eigen::MatrixXd& truth) {
  const SpdFactor fm = factor_spd(model);
  const SpdFactor ft = factor_spd(truth);
  if (!fm.ok || !ft.ok) return kInfinity;
  const double p = static_cast<double>(model.rows());
  return 0.5 * (ft.inverse.cwiseProduct(model).sum() - p + ft.log_det - fm.log_det);
}

RecoveryMetrics recovery_metrics(const Solution& solution, const GroundTruth& truth) {
  const auto p = truth.S_hat.rows();
  if (solution.S_star.rows() != p || solution.L_star.rows() != p) {
    throw Error(ErrorKind::Shape, "solution and ground truth differ in dimension");
  }
  RecoveryMetrics m;
  m.rank_estimate = solution.rank_estimate;
  m.rank_match = solution.rank_estimate == truth.r;

  int tp = 0;
  int predicted = 0;
  for (const auto& [i, j] : solution.support) {
    if (i == j) continue;
    ++predicted;
    tp += truth.support_mask(i, j) ? 1 : 0;
  }
  int actual = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) actual += truth.support_mask(i, j) ? 1 : 0;
  }
  m.support_precision = predicted ? static_cast<double>(tp) / predicted : (actual ? 0.0 : 1.0);
  m.support_recall = actual ? static_cast<double>(tp) / actual : 1.0;
  if (predicted == 0 && actual == 0) {
    m.support_fscore = 1.0;
  } else {
    m.support_fscore = tp ? 2.0 * tp / static_cast<double>(predicted + actual) : 0.0;
  }

  const Eigen::MatrixXd L_hat = truth.L_hat();
  m.rel_err_L = (solution.L_star - L_hat).norm() / L_hat.norm();
  m.rel_err_S = (solution.S_star - truth.S_hat).norm() / truth.S_hat.norm();
  m.kl_to_truth = gaussian_kl(solution.L_star + solution.S_star, truth.Sigma_hat);
  m.l0_matrix_count = static_cast<int>((solution.S_star.array() != 0.0).count());
  m.l0_coordinate_count = static_cast<int>((solution.s_star.array() != 0.0).count());
  return m;
}

}  // namespace l0fa
