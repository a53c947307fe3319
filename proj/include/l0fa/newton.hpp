#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "l0fa/objective.hpp"
#include "l0fa/prox.hpp"
#include "l0fa/trace.hpp"

namespace l0fa {

struct NewtonParams {
  double gamma = 0.05;         // prox stepsize
  double delta = 1e-4;         // safeguard margin
  double sigma = 5e-5;         // Armijo slope fraction, in (0, 1/2)
  double beta = 0.5;           // backtracking ratio, in (0, 1)
  double residual_tol = 1e-4;  // on ||F|| / sqrt(2m)
  int max_inner_iters = 200;
  int max_backtracks = 50;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;
};

struct Direction {
  Eigen::VectorXd d_ell;
  Eigen::VectorXd d_s;
  DirectionKind kind = DirectionKind::Newton;

  Eigen::VectorXd stacked() const;
};

/// Solves the reduced Newton system on ell and s_T, with d_{s_Tbar} = -s_Tbar.
/// `hessian` is the full 2m x 2m Hessian at x. Throws NumericalBreakdown if
/// the reduced matrix does not factor.
Direction newton_direction(const Iterate& x, const Gradient& g, const Eigen::MatrixXd& hessian,
                           const IndexSet& T);
Direction newton_direction(const Iterate& x, const IndexSet& T, const BarrierObjective& barrier);

/// <g_{s_T}, d_{s_T}> <= -delta ||d_s||^2 + ||s_Tbar||^2 / (4 gamma)
bool descent_safeguard(const Direction& d, const Eigen::VectorXd& g_s, const Eigen::VectorXd& s,
                       const IndexSet& T, double delta, double gamma);

/// d_ell = -g_ell, d_{s_T} = -g_{s_T}, d_{s_Tbar} = -s_Tbar.
Direction fallback_direction(const Iterate& x, const Gradient& g, const IndexSet& T);

/// The modified update: ell + alpha d_ell, s_T + alpha d_{s_T}, s_Tbar = 0.
Iterate step_point(const BasisSet& basis, const Iterate& x, const Direction& d, const IndexSet& T,
                   double alpha);

struct LineSearchResult {
  bool accepted = false;
  double alpha = 0.0;
  int backtracks = 0;
  double h_next = kInfinity;
  std::optional<Iterate> next;
};

/// Smallest v with h(step_point(beta^v)) <= h + sigma beta^v <g, d>, for
/// v = 0..max_backtracks. Trial points off the feasible set evaluate to +inf.
LineSearchResult line_search(const Iterate& x, double h_current, const Gradient& g,
                             const Direction& d, const IndexSet& T,
                             const BarrierObjective& barrier, const NewtonParams& params);

/// Everything known about one accepted step. Handed to observers.
struct NewtonStep {
  int inner_iter;
  const Iterate& before;
  const Gradient& gradient;
  const IndexSet& T;
  const Direction& direction;
  double alpha;
  const Iterate& after;
  double h_before;
  double h_after;
};

using NewtonObserver = std::function<void(const NewtonStep&)>;

struct InnerSolveResult {
  Iterate solution;
  SolveStatus status;
  int iterations = 0;
  double final_residual = 0.0;
  SolveTrace trace;
};

struct TraceContext {
  int outer_iter = 0;
  const TraceClock* clock = nullptr;
};

/// Safeguarded Newton iteration on the stationary-point equation at fixed tau.
/// Throws InfeasiblePoint if init is not strictly feasible.
InnerSolveResult solve_tau_min(const Iterate& init, const BarrierObjective& barrier,
                               const NewtonParams& params, TraceContext ctx = {},
                               const NewtonObserver& observer = {});

}  // namespace l0fa
