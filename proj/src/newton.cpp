#include "l0fa/newton.hpp"

#include <cmath>
#include <string>

#include "l0fa/errors.hpp"

namespace l0fa {

void NewtonParams::validate() const {
  auto bad = [](const std::string& field, const std::string& rule) {
    throw Error(ErrorKind::InvalidConfig, field + " must be " + rule);
  };
  if (!(gamma > 0.0) || !std::isfinite(gamma)) bad("gamma", "positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) bad("delta", "positive");
  if (!(sigma > 0.0 && sigma < 0.5)) bad("sigma", "in (0, 1/2)");
  if (!(beta > 0.0 && beta < 1.0)) bad("beta", "in (0, 1)");
  if (!(residual_tol > 0.0)) bad("residual_tol", "positive");
  if (max_inner_iters < 0) bad("max_inner_iters", "nonnegative");
  if (max_backtracks < 0) bad("max_backtracks", "nonnegative");
}

Eigen::VectorXd Direction::stacked() const {
  Eigen::VectorXd d(d_ell.size() + d_s.size());
  d << d_ell, d_s;
  return d;
}

Direction newton_direction(const Iterate& x, const Gradient& g, const Eigen::MatrixXd& hessian,
                           const IndexSet& T) {
  const int m = static_cast<int>(x.ell().size());
  if (hessian.rows() != 2 * m || hessian.cols() != 2 * m || T.universe() != m) {
    throw Error(ErrorKind::Shape, "Newton system dimensions do not match the iterate");
  }
  const IndexSet Tbar = T.complement();

  // rows/cols of the full Hessian kept in the reduced system: all of ell, then s_T
  std::vector<int> kept(static_cast<std::size_t>(m + T.size()));
  for (int a = 0; a < m; ++a) kept[static_cast<std::size_t>(a)] = a;
  for (int k = 0; k < T.size(); ++k) kept[static_cast<std::size_t>(m + k)] = m + T.members()[static_cast<std::size_t>(k)];
  std::vector<int> dropped(static_cast<std::size_t>(Tbar.size()));
  for (int k = 0; k < Tbar.size(); ++k) dropped[static_cast<std::size_t>(k)] = m + Tbar.members()[static_cast<std::size_t>(k)];

  const Eigen::VectorXd s_Tbar = x.s()(Tbar.members());
  Eigen::VectorXd g_kept(m + T.size());
  g_kept << g.ell, g.s(T.members());

  Eigen::VectorXd rhs = -g_kept;
  if (Tbar.size() > 0) rhs.noalias() += hessian(kept, dropped) * s_Tbar;

  const Eigen::MatrixXd H_reduced = hessian(kept, kept);
  Eigen::LLT<Eigen::MatrixXd> llt(H_reduced);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalBreakdown,
                "reduced Newton matrix is not positive definite (size " +
                    std::to_string(H_reduced.rows()) + ")");
  }
  const Eigen::VectorXd sol = llt.solve(rhs);

  Direction d;
  d.kind = DirectionKind::Newton;
  d.d_ell = sol.head(m);
  d.d_s = Eigen::VectorXd::Zero(m);
  d.d_s(T.members()) = sol.tail(T.size());
  d.d_s(Tbar.members()) = -s_Tbar;
  return d;
}

Direction newton_direction(const Iterate& x, const IndexSet& T, const BarrierObjective& barrier) {
  const Gradient g = grad_h_tau(x, barrier);
  return newton_direction(x, g, hessian_h_tau(x, barrier), T);
}

bool descent_safeguard(const Direction& d, const Eigen::VectorXd& g_s, const Eigen::VectorXd& s,
                       const IndexSet& T, double delta, double gamma) {
  const double lhs = g_s(T.members()).dot(d.d_s(T.members()));
  const double s_Tbar_sq = s(T.complement().members()).squaredNorm();
  return lhs <= -delta * d.d_s.squaredNorm() + s_Tbar_sq / (4.0 * gamma);
}

Direction fallback_direction(const Iterate& x, const Gradient& g, const IndexSet& T) {
  Direction d;
  d.kind = DirectionKind::GradientFallback;
  d.d_ell = -g.ell;
  d.d_s = -g.s;
  const IndexSet Tbar = T.complement();
  d.d_s(Tbar.members()) = -x.s()(Tbar.members());
  return d;
}

Iterate step_point(const BasisSet& basis, const Iterate& x, const Direction& d, const IndexSet& T,
                   double alpha) {
  Eigen::VectorXd ell = x.ell() + alpha * d.d_ell;
  Eigen::VectorXd s = Eigen::VectorXd::Zero(x.s().size());
  s(T.members()) = x.s()(T.members()) + alpha * d.d_s(T.members());
  return Iterate(basis, std::move(ell), std::move(s));
}

LineSearchResult line_search(const Iterate& x, double h_current, const Gradient& g,
                             const Direction& d, const IndexSet& T,
                             const BarrierObjective& barrier, const NewtonParams& params) {
  const double slope = g.stacked().dot(d.stacked());
  const auto& basis = barrier.problem.basis();
  LineSearchResult out;
  double alpha = 1.0;
  for (int v = 0; v <= params.max_backtracks; ++v, alpha *= params.beta) {
    Iterate trial = step_point(basis, x, d, T, alpha);
    const double h_trial = eval_h_tau(trial, barrier);
    if (h_trial <= h_current + params.sigma * alpha * slope) {
      out.accepted = true;
      out.alpha = alpha;
      out.backtracks = v;
      out.h_next = h_trial;
      out.next.emplace(std::move(trial));
      return out;
    }
    out.backtracks = v;
  }
  return out;
}

InnerSolveResult solve_tau_min(const Iterate& init, const BarrierObjective& barrier,
                               const NewtonParams& params, TraceContext ctx,
                               const NewtonObserver& observer) {
  params.validate();
  if (!init.strictly_feasible()) {
    throw Error(ErrorKind::InfeasiblePoint, "inner solve started outside the strictly feasible set");
  }
  const TraceClock local_clock;
  const TraceClock& clock = ctx.clock ? *ctx.clock : local_clock;
  const double C = barrier.problem.C();

  InnerSolveResult result{init, SolveStatus::IterationCap, 0, 0.0, {}};
  Iterate& x = result.solution;

  for (int k = 0;; ++k) {
    const double h = eval_h_tau(x, barrier);
    const Gradient g = grad_h_tau(x, barrier);
    const StationarityResidual res = stationarity_residual(x, g, params.gamma, C);

    TraceRow row;
    row.outer_iter = ctx.outer_iter;
    row.tau = barrier.tau;
    row.inner_iter = k;
    row.objective_h_tau = h;
    row.objective_f = eval_f(x, barrier.problem);
    row.residual_normalized = res.normalized();
    row.support_size = x.support_size();
    result.final_residual = row.residual_normalized;

    const bool converged = row.residual_normalized <= params.residual_tol;
    if (converged || k >= params.max_inner_iters) {
      result.status = converged ? SolveStatus::Converged : SolveStatus::IterationCap;
      row.wall_time_ns = clock.elapsed_ns();
      result.trace.rows.push_back(row);
      break;
    }

    Direction d = newton_direction(x, g, hessian_h_tau(x, barrier), res.T);
    if (!descent_safeguard(d, g.s, x.s(), res.T, params.delta, params.gamma)) {
      d = fallback_direction(x, g, res.T);
    }
    row.direction_kind = d.kind;

    LineSearchResult ls = line_search(x, h, g, d, res.T, barrier, params);
    row.wall_time_ns = clock.elapsed_ns();
    if (!ls.accepted) {
      row.step_alpha = 0.0;
      result.trace.rows.push_back(row);
      result.status = SolveStatus::LineSearchFailure;
      break;
    }
    row.step_alpha = ls.alpha;
    result.trace.rows.push_back(row);
    ++result.iterations;

    if (observer) {
      observer(NewtonStep{k, x, g, res.T, d, ls.alpha, *ls.next, h, ls.h_next});
    }
    x = std::move(*ls.next);
  }
  return result;
}

}  // namespace l0fa
