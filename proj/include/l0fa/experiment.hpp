#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "l0fa/baseline.hpp"
#include "l0fa/datagen.hpp"
#include "l0fa/ipm.hpp"

namespace l0fa {

/// A ground truth and the samples drawn from it.
struct SyntheticInstance {
  GroundTruth truth;
  Eigen::MatrixXd samples;  // N x p
};

/// Samples use seed config.seed + 1 so the truth and the draws are
/// independent streams.
SyntheticInstance make_instance(const GeneratorConfig& config, int N);

/// p = 40, r = 5, N = 1200, SNR = 1, seed 42.
SyntheticInstance default_instance();

struct Comparison {
  Solution ipm;
  BaselineResult baseline;
  double baseline_tau = 0.0;
};

/// Runs the IPM from the default initialization, then the baseline on the
/// barrier problem at the IPM's final tau from the same initialization, with
/// the same gamma and residual tolerance.
Comparison compare_solvers(const ProblemData& problem, const IpmParams& ipm, BaselineParams baseline);

}  // namespace l0fa
