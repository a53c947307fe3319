#pragma once

#include "l0fa/newton.hpp"
#include "l0fa/objective.hpp"
#include "l0fa/trace.hpp"

namespace l0fa {

/// Block-coordinate proximal-gradient comparator. Each iteration takes a
/// backtracked gradient step on ell, then a hard-thresholding prox step on s
/// whose stepsize starts at gamma and is halved until the point is strictly
/// feasible and the quadratic upper model holds.
struct BaselineParams {
  double step_ell = 1.0;     // initial ell stepsize; grows x2 after each accepted step
  double max_step_ell = 1e3;
  double gamma = 0.05;       // prox stepsize, also the residual's gamma
  double armijo = 1e-4;      // sufficient decrease fraction for the ell step
  double residual_tol = 1e-4;
  int max_iters = 5000;
  int max_backtracks = 60;

  void validate() const;
};

struct BaselineResult {
  Iterate solution;
  SolveStatus status;
  int iterations = 0;
  double final_residual = 0.0;
  /// First iteration whose residual met residual_tol, or -1.
  int iterations_to_tol = -1;
  SolveTrace trace;
};

/// Composite objective h_tau + C ||s||_0 (coordinate count).
double composite_objective(const Iterate& x, const BarrierObjective& barrier);

/// Throws InfeasiblePoint if init is not strictly feasible.
BaselineResult bcd_solve(const Iterate& init, const BarrierObjective& barrier,
                         const BaselineParams& params, TraceContext ctx = {});

}  // namespace l0fa
