#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "l0fa/objective.hpp"

namespace l0fa {

/// sqrt(2 gamma C), the hard-thresholding level.
double hard_threshold(double gamma, double C);

/// Hard thresholding: 0 if |x| <= sqrt(2 gamma C), else x. The tie |x| =
/// sqrt(2 gamma C) goes to 0.
double prox_l0_scalar(double x, double gamma, double C);
Eigen::VectorXd prox_l0_vec(const Eigen::VectorXd& x, double gamma, double C);

/// Sorted, duplicate-free subset of {0, ..., m-1}.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<int> members, int universe);

  const std::vector<int>& members() const& noexcept { return members_; }
  std::vector<int> members() && { return std::move(members_); }
  int universe() const noexcept { return universe_; }
  int size() const noexcept { return static_cast<int>(members_.size()); }
  bool contains(int i) const;
  IndexSet complement() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> members_;
  int universe_ = 0;
};

/// Indices of the nonzero entries of v.
IndexSet support_of(const Eigen::VectorXd& v);

/// T = { i : |s_i - gamma g_i| >= sqrt(2 gamma C) } (inclusive).
IndexSet index_set_T(const Eigen::VectorXd& s, const Eigen::VectorXd& g_s, double gamma, double C);
IndexSet index_set_T(const Iterate& x, const Eigen::VectorXd& g_s, double gamma, double C);

/// F = [g_ell; g_{s_T}; s_{T-bar}] with T taken at the point itself.
struct StationarityResidual {
  IndexSet T;
  Eigen::VectorXd r_ell;
  Eigen::VectorXd r_sT;
  Eigen::VectorXd r_sTbar;
  double norm = 0.0;

  /// norm / sqrt(2m), the quantity the stopping rule compares to its tolerance.
  double normalized() const;
  Eigen::VectorXd stacked() const;
};

StationarityResidual stationarity_residual(const Iterate& x, const Gradient& g, double gamma,
                                           double C);
StationarityResidual stationarity_residual(const Iterate& x, const BarrierObjective& barrier,
                                           double gamma, double C);

struct StationarityViolation {
  enum class Clause {
    GradientEll,         // g_ell != 0
    GradientSupport,     // g_{s_i} != 0 for i in supp(s)
    SupportMagnitude,    // |s_i| < sqrt(2 gamma C) for i in supp(s)
    GradientOffSupport,  // |g_{s_i}| > sqrt(2C/gamma) off supp(s)
  };
  Clause clause;
  int index;
  double value;
  double bound;
};

std::string to_string(StationarityViolation::Clause clause);

struct StationarityReport {
  bool is_stationary = true;
  std::vector<StationarityViolation> violations;
};

inline constexpr double kDefaultStationarityTol = 1e-6;

/// Checks the gamma-stationarity conditions clause by clause, each with
/// absolute slack tol.
StationarityReport check_gamma_stationary(const Iterate& x, const Gradient& g, double gamma,
                                          double C, double tol = kDefaultStationarityTol);
StationarityReport check_gamma_stationary(const Iterate& x, const BarrierObjective& barrier,
                                          double gamma, double C,
                                          double tol = kDefaultStationarityTol);

}  // namespace l0fa
