#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "l0fa/newton.hpp"
#include "l0fa/objective.hpp"
#include "l0fa/trace.hpp"

namespace l0fa {

struct IpmParams {
  double tau0 = 0.5;
  double theta = 0.5;
  double epsilon = 1e-6;
  NewtonParams newton;
  double eta_rank = 1e-6;  // relative eigenvalue threshold for the rank estimate
  double eta_supp = 1e-6;  // relative magnitude threshold for the support of S

  /// Throws InvalidConfig naming the offending field. tau0 <= epsilon is
  /// allowed and means no inner solves.
  void validate() const;
};

/// Number of inner solves the barrier schedule performs: the count of k >= 0
/// with tau0 theta^k > epsilon.
int barrier_schedule_length(double tau0, double theta, double epsilon);

struct InnerSolveSummary {
  int outer_iter = 0;
  double tau = 0.0;
  SolveStatus status = SolveStatus::Converged;
  int iterations = 0;
  double final_residual = 0.0;
  double objective_f = 0.0;
  double objective_h_tau = 0.0;
};

struct Solution {
  Eigen::MatrixXd L_star;
  Eigen::MatrixXd S_star;
  Eigen::VectorXd ell_star;
  Eigen::VectorXd s_star;
  int rank_estimate = 0;
  /// Upper-triangular pairs (i <= j) with |S*_ij| above threshold.
  std::vector<std::pair<int, int>> support;

  SolveStatus status = SolveStatus::Converged;
  /// Barrier level of the last inner solve (tau0 if none ran).
  double final_tau = 0.0;
  std::vector<InnerSolveSummary> solves;
  SolveTrace trace;

  int total_inner_iterations() const;
};

/// (Sigma_check / 2, Sigma_check / 2).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> default_init(const ProblemData& problem);

/// Matrices, rank estimate and support read off a final iterate:
/// rank = #{eig(L) > eta_rank * lambda_max(L)},
/// support = {(i, j) : |S_ij| > eta_supp * max |S|}.
Solution recover_solution(const Iterate& x, double eta_rank, double eta_supp);

/// Barrier loop: solve at tau, then tau <- theta tau, while tau > epsilon,
/// each inner solve warm-started at the previous solution. A line-search
/// failure stops the loop and is reported with the partial trace.
Solution ipm_solve(const ProblemData& problem, const Eigen::MatrixXd& L0, const Eigen::MatrixXd& S0,
                   const IpmParams& params, const NewtonObserver& observer = {});

}  // namespace l0fa
