#include "l0fa/objective.hpp"

#include <cmath>
#include <string>

#include "l0fa/errors.hpp"

namespace l0fa {

SpdFactor factor_spd(const Eigen::MatrixXd& X) {
  SpdFactor out;
  if (X.rows() != X.cols() || !X.allFinite()) return out;
  Eigen::LLT<Eigen::MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return out;
  const auto diag = llt.matrixLLT().diagonal();
  if ((diag.array() <= 0.0).any()) return out;
  out.log_det = 2.0 * diag.array().log().sum();
  if (!std::isfinite(out.log_det)) return out;
  out.inverse = llt.solve(Eigen::MatrixXd::Identity(X.rows(), X.cols()));
  // symmetrize away rounding so downstream projections see an exact symmetric matrix
  out.inverse = 0.5 * (out.inverse + out.inverse.transpose()).eval();
  out.ok = true;
  return out;
}

bool is_positive_definite(const Eigen::MatrixXd& X) {
  if (X.rows() != X.cols() || !X.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(X);
  return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& Y) {
  if (Y.rows() < 1) throw Error(ErrorKind::InvalidInput, "sample list is empty");
  const auto p = Y.cols();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
  acc.selfadjointView<Eigen::Lower>().rankUpdate(Y.transpose(), 1.0 / static_cast<double>(Y.rows()));
  Eigen::MatrixXd out = acc.selfadjointView<Eigen::Lower>();
  return out;
}

Eigen::MatrixXd sample_covariance(const std::vector<Eigen::VectorXd>& samples) {
  if (samples.empty()) throw Error(ErrorKind::InvalidInput, "sample list is empty");
  const auto p = samples.front().size();
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(samples.size()), p);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != p) {
      throw Error(ErrorKind::Shape, "sample " + std::to_string(i) + " has length " +
                                        std::to_string(samples[i].size()) + ", expected " +
                                        std::to_string(p));
    }
    Y.row(static_cast<Eigen::Index>(i)) = samples[i].transpose();
  }
  return sample_covariance(Y);
}

ProblemData::ProblemData(Eigen::MatrixXd sigma_check, double C, double mu)
    : sigma_check_(std::move(sigma_check)), C_(C), mu_(mu) {
  if (!(C > 0.0)) throw Error(ErrorKind::Parameter, "C must be positive");
  if (!(mu > 0.0)) throw Error(ErrorKind::Parameter, "mu must be positive");
  if (sigma_check_.rows() != sigma_check_.cols() || sigma_check_.rows() < 1) {
    throw Error(ErrorKind::Shape, "sample covariance must be square and nonempty");
  }
  if (relative_asymmetry(sigma_check_) > kSymmetryTolerance) {
    throw Error(ErrorKind::Shape, "sample covariance is not symmetric");
  }
  auto f = factor_spd(sigma_check_);
  if (!f.ok) {
    throw Error(ErrorKind::InfeasibleData,
                "sample covariance is not positive definite (too few samples or degenerate data)");
  }
  sigma_check_inv_ = std::move(f.inverse);
  log_det_sigma_check_ = f.log_det;
  basis_ = std::make_shared<const BasisSet>(static_cast<int>(sigma_check_.rows()));
}

Iterate::Iterate(const BasisSet& basis, Eigen::VectorXd ell, Eigen::VectorXd s)
    : ell_(std::move(ell)), s_(std::move(s)) {
  L_ = basis.to_mat(ell_);
  S_ = basis.to_mat(s_);
  Sigma_ = L_ + S_;
  fL_ = factor_spd(L_);
  fS_ = factor_spd(S_);
  fSigma_ = factor_spd(Sigma_);
}

Iterate Iterate::from_matrices(const BasisSet& basis, const Eigen::MatrixXd& L,
                               const Eigen::MatrixXd& S) {
  return Iterate(basis, basis.to_vec(L), basis.to_vec(S));
}

namespace {
const SpdFactor& require(const SpdFactor& f, const char* name) {
  if (!f.ok) {
    throw Error(ErrorKind::InfeasiblePoint, std::string(name) + " is not positive definite");
  }
  return f;
}
}  // namespace

const SpdFactor& Iterate::L_factor() const { return require(fL_, "L"); }
const SpdFactor& Iterate::S_factor() const { return require(fS_, "S"); }
const SpdFactor& Iterate::Sigma_factor() const { return require(fSigma_, "L + S"); }

int Iterate::support_size() const { return static_cast<int>((s_.array() != 0.0).count()); }

BarrierObjective::BarrierObjective(ProblemData problem_, double tau_)
    : problem(std::move(problem_)), tau(tau_) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::Parameter, "barrier parameter tau must be nonnegative");
  }
}

Eigen::VectorXd Gradient::stacked() const {
  Eigen::VectorXd g(ell.size() + s.size());
  g << ell, s;
  return g;
}

namespace {
double f_from_factor(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Sigma,
                     const SpdFactor& fSigma, const ProblemData& problem) {
  if (!fSigma.ok) return kInfinity;
  const double fit = Sigma.cwiseProduct(problem.sigma_check_inv()).sum();
  return L.trace() + problem.mu() * (fit - fSigma.log_det);
}
}  // namespace

double eval_f(const Eigen::MatrixXd& L, const Eigen::MatrixXd& S, const ProblemData& problem) {
  const Eigen::MatrixXd Sigma = L + S;
  return f_from_factor(L, Sigma, factor_spd(Sigma), problem);
}

double eval_f(const Iterate& x, const ProblemData& problem) {
  if (!x.Sigma_pd()) return kInfinity;
  return f_from_factor(x.L(), x.Sigma(), x.Sigma_factor(), problem);
}

double eval_h_tau(const Iterate& x, const BarrierObjective& barrier) {
  if (!x.strictly_feasible() || !x.Sigma_pd()) return kInfinity;
  const double f = eval_f(x, barrier.problem);
  return f - barrier.tau * (x.L_factor().log_det + x.S_factor().log_det);
}

Gradient barrier_gradient(const Iterate& x, const BasisSet& basis,
                          const Eigen::MatrixXd& sigma_check_inv, double mu, double tau) {
  const Eigen::MatrixXd& Sigma_inv = x.Sigma_factor().inverse;
  const Eigen::MatrixXd& L_inv = x.L_factor().inverse;
  const Eigen::MatrixXd& S_inv = x.S_factor().inverse;
  const Eigen::MatrixXd fit = mu * (sigma_check_inv - Sigma_inv);
  const auto p = fit.rows();
  Gradient g;
  g.ell = basis.project(Eigen::MatrixXd::Identity(p, p) + fit - tau * L_inv);
  g.s = basis.project(fit - tau * S_inv);
  return g;
}

Gradient grad_h_tau(const Iterate& x, const BarrierObjective& barrier) {
  const auto& pr = barrier.problem;
  return barrier_gradient(x, pr.basis(), pr.sigma_check_inv(), pr.mu(), barrier.tau);
}

Eigen::MatrixXd hessian_h_tau(const Iterate& x, const BarrierObjective& barrier) {
  const auto& basis = barrier.problem.basis();
  const double mu = barrier.problem.mu();
  const double tau = barrier.tau;
  const int m = basis.m();

  const Eigen::MatrixXd A = mu * basis.congruence_gram(x.Sigma_factor().inverse);
  Eigen::MatrixXd H(2 * m, 2 * m);
  H.topLeftCorner(m, m) = A + tau * basis.congruence_gram(x.L_factor().inverse);
  H.topRightCorner(m, m) = A;
  H.bottomLeftCorner(m, m) = A;
  H.bottomRightCorner(m, m) = A + tau * basis.congruence_gram(x.S_factor().inverse);
  return H;
}

}  // namespace l0fa
