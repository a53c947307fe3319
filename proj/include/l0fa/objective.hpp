#pragma once

#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "l0fa/symbasis.hpp"

namespace l0fa {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Cholesky-based certificate for a symmetric matrix. `ok` is false when the
/// factorization hits a nonpositive pivot; the other fields are then unset.
struct SpdFactor {
  bool ok = false;
  double log_det = 0.0;
  Eigen::MatrixXd inverse;
};

SpdFactor factor_spd(const Eigen::MatrixXd& X);
bool is_positive_definite(const Eigen::MatrixXd& X);

/// Sample covariance (1/N) sum y_i y_i^T, exactly symmetric.
Eigen::MatrixXd sample_covariance(const std::vector<Eigen::VectorXd>& samples);
/// Same, with one sample per row.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples_by_row);

/// Sample covariance with its cached inverse, plus the regularization weights.
class ProblemData {
 public:
  /// Throws InfeasibleData if sigma_check is not positive definite and
  /// Parameter if C or mu is not positive.
  ProblemData(Eigen::MatrixXd sigma_check, double C, double mu);

  int p() const noexcept { return basis_->p(); }
  int m() const noexcept { return basis_->m(); }
  double C() const noexcept { return C_; }
  double mu() const noexcept { return mu_; }
  const BasisSet& basis() const noexcept { return *basis_; }
  std::shared_ptr<const BasisSet> shared_basis() const noexcept { return basis_; }

  const Eigen::MatrixXd& sigma_check() const noexcept { return sigma_check_; }
  const Eigen::MatrixXd& sigma_check_inv() const noexcept { return sigma_check_inv_; }
  double log_det_sigma_check() const noexcept { return log_det_sigma_check_; }

 private:
  std::shared_ptr<const BasisSet> basis_;
  Eigen::MatrixXd sigma_check_;
  Eigen::MatrixXd sigma_check_inv_;
  double log_det_sigma_check_ = 0.0;
  double C_;
  double mu_;
};

/// A point (ell, s) in basis coordinates with the matrices L, S, Sigma = L + S
/// and their factorizations computed once at construction. Construction never
/// throws on indefinite matrices; accessors that need a factorization do.
class Iterate {
 public:
  Iterate(const BasisSet& basis, Eigen::VectorXd ell, Eigen::VectorXd s);
  static Iterate from_matrices(const BasisSet& basis, const Eigen::MatrixXd& L,
                               const Eigen::MatrixXd& S);

  const Eigen::VectorXd& ell() const noexcept { return ell_; }
  const Eigen::VectorXd& s() const noexcept { return s_; }
  const Eigen::MatrixXd& L() const noexcept { return L_; }
  const Eigen::MatrixXd& S() const noexcept { return S_; }
  const Eigen::MatrixXd& Sigma() const noexcept { return Sigma_; }

  bool L_pd() const noexcept { return fL_.ok; }
  bool S_pd() const noexcept { return fS_.ok; }
  bool Sigma_pd() const noexcept { return fSigma_.ok; }
  /// L > 0 and S > 0.
  bool strictly_feasible() const noexcept { return fL_.ok && fS_.ok; }

  const SpdFactor& L_factor() const;
  const SpdFactor& S_factor() const;
  const SpdFactor& Sigma_factor() const;

  /// Number of nonzero coordinates of s.
  int support_size() const;

 private:
  Eigen::VectorXd ell_;
  Eigen::VectorXd s_;
  Eigen::MatrixXd L_;
  Eigen::MatrixXd S_;
  Eigen::MatrixXd Sigma_;
  SpdFactor fL_;
  SpdFactor fS_;
  SpdFactor fSigma_;
};

/// h_tau = f - tau (log det L + log det S). tau = 0 gives f itself.
struct BarrierObjective {
  BarrierObjective(ProblemData problem, double tau);

  ProblemData problem;
  double tau;
};

struct Gradient {
  Eigen::VectorXd ell;
  Eigen::VectorXd s;

  /// [ell; s]
  Eigen::VectorXd stacked() const;
};

/// tr(L) + mu (tr(Sigma Sigma_check^{-1}) - log det Sigma); +inf when L + S is
/// not positive definite.
double eval_f(const Eigen::MatrixXd& L, const Eigen::MatrixXd& S, const ProblemData& problem);
double eval_f(const Iterate& x, const ProblemData& problem);

/// +inf when L or S is not positive definite.
double eval_h_tau(const Iterate& x, const BarrierObjective& barrier);

/// Gradient of h_tau in coordinates. Throws InfeasiblePoint off the strictly
/// feasible set.
Gradient grad_h_tau(const Iterate& x, const BarrierObjective& barrier);

/// Gradient kernel with explicit weights; grad_h_tau forwards to it. Accepts
/// mu = 0 and tau = 0.
Gradient barrier_gradient(const Iterate& x, const BasisSet& basis,
                          const Eigen::MatrixXd& sigma_check_inv, double mu, double tau);

/// 2m x 2m Hessian of h_tau in [ell; s] ordering:
///   [ mu A + tau B_L   mu A           ]
///   [ mu A             mu A + tau B_S ]
/// with A[a,b] = tr(E_a Sigma^-1 E_b Sigma^-1) and B_X likewise with X^-1.
/// Throws InfeasiblePoint off the strictly feasible set.
Eigen::MatrixXd hessian_h_tau(const Iterate& x, const BarrierObjective& barrier);

}  // namespace l0fa
