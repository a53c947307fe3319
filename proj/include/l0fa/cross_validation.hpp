#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "l0fa/ipm.hpp"

namespace l0fa {

struct CvConfig {
  int folds = 3;
  std::vector<double> C_grid;
  std::vector<double> mu_grid;
  std::uint64_t seed = 0;  // fold shuffling
  IpmParams ipm;

  void validate() const;
};

struct CvScore {
  double C = 0.0;
  double mu = 0.0;
  double score = 0.0;  // mean held-out negative log-likelihood per sample
  std::vector<double> fold_scores;
  int rank_estimate = 0;  // from the fit on the first training split
};

struct CvResult {
  double best_C = 0.0;
  double best_mu = 0.0;
  std::vector<CvScore> table;  // C-major grid order
  std::vector<std::string> warnings;
};

/// Average Gaussian negative log-likelihood of zero-mean data with sample
/// covariance `validation_cov` under N(0, model).
double gaussian_nll(const Eigen::MatrixXd& model, const Eigen::MatrixXd& validation_cov);

/// Fold index of each of n samples: a seeded shuffle dealt round-robin.
std::vector<int> assign_folds(int n, int folds, std::uint64_t seed);

/// k-fold grid search over (C, mu). Each grid point is fit on the training
/// folds with ipm_solve from the default initialization and scored on the
/// held-out fold.
CvResult cross_validate(const Eigen::MatrixXd& samples, const CvConfig& config);

}  // namespace l0fa
