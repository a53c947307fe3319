#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "l0fa/ipm.hpp"

namespace l0fa {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Factor model y = Gamma u + w, u ~ N(0, I_r), w ~ N(0, S_hat).
struct GroundTruth {
  Eigen::MatrixXd Gamma;      // p x r, full column rank
  Eigen::MatrixXd S_hat;      // sparse, positive definite
  Eigen::MatrixXd Sigma_hat;  // Gamma Gamma^T + S_hat
  BoolMatrix support_mask;    // nonzero pattern of S_hat, diagonal included
  int r = 0;
  std::uint64_t seed = 0;

  Eigen::MatrixXd L_hat() const { return Gamma * Gamma.transpose(); }
  int p() const { return static_cast<int>(S_hat.rows()); }
};

struct GeneratorConfig {
  int p = 40;
  int r = 5;
  double density = 0.05;  // probability that an off-diagonal pair of S_hat is nonzero
  double snr = 1.0;       // ||Gamma Gamma^T||_F / ||S_hat||_F
  std::uint64_t seed = 42;
  // off-diagonal magnitudes ~ U[offdiag_min, offdiag_max] with random sign,
  // diagonal = absolute row sum + diag_margin (before SNR rescaling)
  double offdiag_min = 0.5;
  double offdiag_max = 1.0;
  double diag_margin = 1.0;

  void validate() const;
};

GroundTruth generate_ground_truth(const GeneratorConfig& config);
GroundTruth generate_ground_truth(int p, int r, double density, double snr, std::uint64_t seed);

/// N x p matrix, one observation per row. Throws InvalidConfig if N < 1.
Eigen::MatrixXd sample_observations(const GroundTruth& truth, int N, std::uint64_t seed);
/// Same model from explicit parts; Gamma may be zero or have zero columns.
Eigen::MatrixXd sample_observations(const Eigen::MatrixXd& Gamma, const Eigen::MatrixXd& S_hat, int N,
                                    std::uint64_t seed);

/// KL( N(0, model) || N(0, truth) ).
double gaussian_kl(const Eigen::MatrixXd& model, const Eigen::MatrixXd& truth);

struct RecoveryMetrics {
  int rank_estimate = 0;
  bool rank_match = false;
  double support_precision = 0.0;
  double support_recall = 0.0;
  double support_fscore = 0.0;  // off-diagonal pairs only
  double rel_err_L = 0.0;
  double rel_err_S = 0.0;
  double kl_to_truth = 0.0;
  int l0_matrix_count = 0;      // nonzero entries of S*, both triangles
  int l0_coordinate_count = 0;  // nonzero basis coordinates of S*
};

RecoveryMetrics recovery_metrics(const Solution& solution, const GroundTruth& truth);

}  // namespace l0fa
