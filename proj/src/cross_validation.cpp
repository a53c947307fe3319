#include "l0fa/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "l0fa/errors.hpp"

namespace l0fa {

void CvConfig::validate() const {
  if (folds < 2) throw Error(ErrorKind::InvalidConfig, "folds must be at least 2");
  if (C_grid.empty()) throw Error(ErrorKind::InvalidConfig, "C grid is empty");
  if (mu_grid.empty()) throw Error(ErrorKind::InvalidConfig, "mu grid is empty");
  for (double c : C_grid) {
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidConfig, "C grid values must be positive");
  }
  for (double mu : mu_grid) {
    if (!(mu > 0.0)) throw Error(ErrorKind::InvalidConfig, "mu grid values must be positive");
  }
  ipm.validate();
}

double gaussian_nll(const Eigen::MatrixXd& model, const Eigen::MatrixXd& validation_cov) {
  const SpdFactor f = factor_spd(model);
  if (!f.ok) return kInfinity;
  const double p = static_cast<double>(model.rows());
  return 0.5 * (p * std::log(2.0 * std::numbers::pi) + f.log_det +
                f.inverse.cwiseProduct(validation_cov).sum());
}

std::vector<int> assign_folds(int n, int folds, std::uint64_t seed) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) fold[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k % folds;
  return fold;
}

namespace {
Eigen::MatrixXd rows_where(const Eigen::MatrixXd& Y, const std::vector<int>& fold, int f, bool in_fold) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if ((fold[i] == f) == in_fold) idx.push_back(static_cast<int>(i));
  }
  return Y(idx, Eigen::all);
}
}  // namespace

CvResult cross_validate(const Eigen::MatrixXd& samples, const CvConfig& config) {
  config.validate();
  const int n = static_cast<int>(samples.rows());
  const int p = static_cast<int>(samples.cols());
  if (n < config.folds) {
    throw Error(ErrorKind::InvalidConfig, "fewer samples than folds");
  }
  CvResult result;
  if (n / config.folds < p) {
    result.warnings.push_back("fold size " + std::to_string(n / config.folds) +
                              " is below p = " + std::to_string(p) +
                              "; per-fold sample covariances may be singular");
  }

  const std::vector<int> fold = assign_folds(n, config.folds, config.seed);
  std::vector<Eigen::MatrixXd> train_cov;
  std::vector<Eigen::MatrixXd> valid_cov;
  for (int f = 0; f < config.folds; ++f) {
    train_cov.push_back(sample_covariance(rows_where(samples, fold, f, false)));
    valid_cov.push_back(sample_covariance(rows_where(samples, fold, f, true)));
  }

  double best = kInfinity;
  for (double C : config.C_grid) {
    for (double mu : config.mu_grid) {
      CvScore row;
      row.C = C;
      row.mu = mu;
      for (int f = 0; f < config.folds; ++f) {
        double score = kInfinity;
        try {
          const ProblemData problem(train_cov[static_cast<std::size_t>(f)], C, mu);
          const auto [L0, S0] = default_init(problem);
          const Solution sol = ipm_solve(problem, L0, S0, config.ipm);
          if (sol.status == SolveStatus::LineSearchFailure) {
            result.warnings.push_back("line-search failure at C=" + std::to_string(C) +
                                      " mu=" + std::to_string(mu) + " fold " + std::to_string(f));
          }
          if (f == 0) row.rank_estimate = sol.rank_estimate;
          score = gaussian_nll(sol.L_star + sol.S_star, valid_cov[static_cast<std::size_t>(f)]);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InfeasibleData && e.kind() != ErrorKind::NumericalBreakdown) throw;
          result.warnings.push_back(std::string("fit failed at C=") + std::to_string(C) +
                                    " mu=" + std::to_string(mu) + ": " + e.what());
        }
        row.fold_scores.push_back(score);
      }
      row.score = std::accumulate(row.fold_scores.begin(), row.fold_scores.end(), 0.0) /
                  static_cast<double>(config.folds);
      if (row.score < best) {
        best = row.score;
        result.best_C = C;
        result.best_mu = mu;
      }
      result.table.push_back(std::move(row));
    }
  }
  if (!std::isfinite(best)) {
    result.best_C = config.C_grid.front();
    result.best_mu = config.mu_grid.front();
    result.warnings.push_back("no grid point produced a finite score");
  }
  return result;
}

}  // namespace l0fa
