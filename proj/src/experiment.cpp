#include "l0fa/experiment.hpp"

#include <utility>

namespace l0fa {

SyntheticInstance make_instance(const GeneratorConfig& config, int N) {
  SyntheticInstance out;
  out.truth = generate_ground_truth(config);
  out.samples = sample_observations(out.truth, N, config.seed + 1);
  return out;
}

SyntheticInstance default_instance() { return make_instance(GeneratorConfig{}, 1200); }

Comparison compare_solvers(const ProblemData& problem, const IpmParams& ipm, BaselineParams baseline) {
  const auto [L0, S0] = default_init(problem);
  Solution ipm_result = ipm_solve(problem, L0, S0, ipm);
  const double tau = ipm_result.final_tau;
  baseline.gamma = ipm.newton.gamma;
  baseline.residual_tol = ipm.newton.residual_tol;
  const BarrierObjective barrier(problem, tau);
  BaselineResult bcd = bcd_solve(Iterate::from_matrices(problem.basis(), L0, S0), barrier, baseline);
  return Comparison{std::move(ipm_result), std::move(bcd), tau};
}

}  // namespace l0fa
