#include "l0fa/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "l0fa/errors.hpp"
#include "l0fa/prox.hpp"

namespace l0fa {

void BaselineParams::validate() const {
  auto bad = [](const std::string& field, const std::string& rule) {
    throw Error(ErrorKind::InvalidConfig, field + " must be " + rule);
  };
  if (!(step_ell > 0.0)) bad("step_ell", "positive");
  if (!(max_step_ell >= step_ell)) bad("max_step_ell", "at least step_ell");
  if (!(gamma > 0.0)) bad("gamma", "positive");
  if (!(armijo > 0.0 && armijo < 1.0)) bad("armijo", "in (0, 1)");
  if (!(residual_tol > 0.0)) bad("residual_tol", "positive");
  if (max_iters < 0) bad("max_iters", "nonnegative");
  if (max_backtracks < 0) bad("max_backtracks", "nonnegative");
}

double composite_objective(const Iterate& x, const BarrierObjective& barrier) {
  return eval_h_tau(x, barrier) + barrier.problem.C() * x.support_size();
}

BaselineResult bcd_solve(const Iterate& init, const BarrierObjective& barrier,
                         const BaselineParams& params, TraceContext ctx) {
  params.validate();
  if (!init.strictly_feasible()) {
    throw Error(ErrorKind::InfeasiblePoint, "baseline started outside the strictly feasible set");
  }
  const TraceClock local_clock;
  const TraceClock& clock = ctx.clock ? *ctx.clock : local_clock;
  const auto& basis = barrier.problem.basis();
  const double C = barrier.problem.C();

  BaselineResult result{init, SolveStatus::IterationCap, 0, 0.0, -1, {}};
  Iterate& x = result.solution;
  double t_ell = params.step_ell;

  for (int k = 0;; ++k) {
    const double h = eval_h_tau(x, barrier);
    const Gradient g = grad_h_tau(x, barrier);
    const double residual = stationarity_residual(x, g, params.gamma, C).normalized();

    TraceRow row;
    row.outer_iter = ctx.outer_iter;
    row.tau = barrier.tau;
    row.inner_iter = k;
    row.objective_h_tau = h;
    row.objective_f = eval_f(x, barrier.problem);
    row.residual_normalized = residual;
    row.support_size = x.support_size();
    result.final_residual = residual;

    const bool converged = residual <= params.residual_tol;
    if (converged && result.iterations_to_tol < 0) result.iterations_to_tol = k;
    if (converged || k >= params.max_iters) {
      result.status = converged ? SolveStatus::Converged : SolveStatus::IterationCap;
      row.wall_time_ns = clock.elapsed_ns();
      result.trace.rows.push_back(row);
      break;
    }
    row.direction_kind = DirectionKind::BlockCoordinate;

    // (a) gradient step on ell with Armijo backtracking
    const double g_ell_sq = g.ell.squaredNorm();
    bool accepted = false;
    for (int v = 0; v <= params.max_backtracks; ++v) {
      Iterate trial(basis, x.ell() - t_ell * g.ell, x.s());
      const double h_trial = eval_h_tau(trial, barrier);
      if (h_trial <= h - params.armijo * t_ell * g_ell_sq) {
        x = std::move(trial);
        accepted = true;
        break;
      }
      t_ell *= 0.5;
    }
    if (!accepted) {
      row.wall_time_ns = clock.elapsed_ns();
      result.trace.rows.push_back(row);
      result.status = SolveStatus::LineSearchFailure;
      break;
    }

    // (b) prox-gradient step on s at the updated ell
    const double h_mid = eval_h_tau(x, barrier);
    const Eigen::VectorXd g_s = grad_h_tau(x, barrier).s;
    double t_s = params.gamma;
    accepted = false;
    for (int v = 0; v <= params.max_backtracks; ++v) {
      Eigen::VectorXd s_new = prox_l0_vec(x.s() - t_s * g_s, t_s, C);
      const Eigen::VectorXd diff = s_new - x.s();
      Iterate trial(basis, x.ell(), std::move(s_new));
      const double h_trial = eval_h_tau(trial, barrier);
      const double model = h_mid + g_s.dot(diff) + diff.squaredNorm() / (2.0 * t_s);
      if (h_trial <= model) {
        x = std::move(trial);
        accepted = true;
        break;
      }
      t_s *= 0.5;
    }
    row.wall_time_ns = clock.elapsed_ns();
    if (!accepted) {
      result.trace.rows.push_back(row);
      result.status = SolveStatus::LineSearchFailure;
      break;
    }
    row.step_alpha = t_s;
    result.trace.rows.push_back(row);
    ++result.iterations;
    t_ell = std::min(2.0 * t_ell, params.max_step_ell);
  }
  return result;
}

}  // namespace l0fa
