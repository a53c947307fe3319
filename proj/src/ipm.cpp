#include "l0fa/ipm.hpp"

#include <cmath>
#include <string>

#include "l0fa/errors.hpp"

namespace l0fa {

void IpmParams::validate() const {
  auto bad = [](const std::string& field, const std::string& rule) {
    throw Error(ErrorKind::InvalidConfig, field + " must be " + rule);
  };
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) bad("tau0", "positive");
  if (!(theta > 0.0 && theta < 1.0)) bad("theta", "in (0, 1)");
  if (!(epsilon > 0.0)) bad("epsilon", "positive");
  if (!(eta_rank >= 0.0 && eta_rank < 1.0)) bad("eta_rank", "in [0, 1)");
  if (!(eta_supp >= 0.0 && eta_supp < 1.0)) bad("eta_supp", "in [0, 1)");
  newton.validate();
}

int barrier_schedule_length(double tau0, double theta, double epsilon) {
  int n = 0;
  while (tau0 * std::pow(theta, n) > epsilon) ++n;
  return n;
}

int Solution::total_inner_iterations() const {
  int n = 0;
  for (const auto& s : solves) n += s.iterations;
  return n;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> default_init(const ProblemData& problem) {
  const Eigen::MatrixXd half = 0.5 * problem.sigma_check();
  if (!is_positive_definite(half)) {
    throw Error(ErrorKind::InfeasibleData, "sample covariance is singular");
  }
  return {half, half};
}

Solution recover_solution(const Iterate& x, double eta_rank, double eta_supp) {
  Solution sol;
  sol.L_star = x.L();
  sol.S_star = x.S();
  sol.ell_star = x.ell();
  sol.s_star = x.s();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.L(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double lambda_max = lambda.size() ? lambda.maxCoeff() : 0.0;
  sol.rank_estimate = lambda_max > 0.0 ? static_cast<int>((lambda.array() > eta_rank * lambda_max).count()) : 0;

  const double s_max = x.S().cwiseAbs().maxCoeff();
  const auto p = x.S().rows();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j) {
      if (s_max > 0.0 && std::abs(x.S()(i, j)) > eta_supp * s_max) {
        sol.support.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return sol;
}

Solution ipm_solve(const ProblemData& problem, const Eigen::MatrixXd& L0, const Eigen::MatrixXd& S0,
                   const IpmParams& params, const NewtonObserver& observer) {
  params.validate();
  Iterate x = Iterate::from_matrices(problem.basis(), L0, S0);
  if (!x.strictly_feasible()) {
    throw Error(ErrorKind::InfeasiblePoint, "initial (L0, S0) must both be positive definite");
  }

  const TraceClock clock;
  SolveTrace trace;
  std::vector<InnerSolveSummary> solves;
  SolveStatus overall = SolveStatus::Converged;
  double last_tau = params.tau0;

  for (int outer = 0;; ++outer) {
    const double tau = params.tau0 * std::pow(params.theta, outer);
    if (!(tau > params.epsilon)) break;
    const BarrierObjective barrier(problem, tau);
    InnerSolveResult inner =
        solve_tau_min(x, barrier, params.newton, TraceContext{outer, &clock}, observer);
    trace.append(inner.trace);
    last_tau = tau;
    x = std::move(inner.solution);

    InnerSolveSummary summary;
    summary.outer_iter = outer;
    summary.tau = tau;
    summary.status = inner.status;
    summary.iterations = inner.iterations;
    summary.final_residual = inner.final_residual;
    summary.objective_f = eval_f(x, problem);
    summary.objective_h_tau = eval_h_tau(x, barrier);
    solves.push_back(summary);

    if (inner.status == SolveStatus::LineSearchFailure) {
      overall = SolveStatus::LineSearchFailure;
      break;
    }
    if (inner.status == SolveStatus::IterationCap) overall = SolveStatus::IterationCap;
  }

  Solution sol = recover_solution(x, params.eta_rank, params.eta_supp);
  sol.status = overall;
  sol.final_tau = last_tau;
  sol.solves = std::move(solves);
  sol.trace = std::move(trace);
  return sol;
}

}  // namespace l0fa
