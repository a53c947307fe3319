#include "l0fa/prox.hpp"

#include <algorithm>
#include <cmath>

#include "l0fa/errors.hpp"

namespace l0fa {

namespace {
void check_prox_params(double gamma, double C) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::Parameter, "gamma must be positive");
  }
  if (!(C > 0.0) || !std::isfinite(C)) throw Error(ErrorKind::Parameter, "C must be positive");
}
}  // namespace

double hard_threshold(double gamma, double C) {
  check_prox_params(gamma, C);
  return std::sqrt(2.0 * gamma * C);
}

double prox_l0_scalar(double x, double gamma, double C) {
  return std::abs(x) > hard_threshold(gamma, C) ? x : 0.0;
}

Eigen::VectorXd prox_l0_vec(const Eigen::VectorXd& x, double gamma, double C) {
  const double t = hard_threshold(gamma, C);
  return (x.array().abs() > t).select(x, 0.0);
}

IndexSet::IndexSet(std::vector<int> members, int universe)
    : members_(std::move(members)), universe_(universe) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && (members_.front() < 0 || members_.back() >= universe_)) {
    throw Error(ErrorKind::Shape, "index set member out of range");
  }
}

bool IndexSet::contains(int i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

IndexSet IndexSet::complement() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(universe_ - size()));
  auto it = members_.begin();
  for (int i = 0; i < universe_; ++i) {
    if (it != members_.end() && *it == i) {
      ++it;
    } else {
      out.push_back(i);
    }
  }
  return IndexSet(std::move(out), universe_);
}

IndexSet support_of(const Eigen::VectorXd& v) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) out.push_back(static_cast<int>(i));
  }
  return IndexSet(std::move(out), static_cast<int>(v.size()));
}

IndexSet index_set_T(const Eigen::VectorXd& s, const Eigen::VectorXd& g_s, double gamma,
                     double C) {
  if (s.size() != g_s.size()) {
    throw Error(ErrorKind::Shape, "s and g_s differ in length");
  }
  const double t = hard_threshold(gamma, C);
  std::vector<int> out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (std::abs(s[i] - gamma * g_s[i]) >= t) out.push_back(static_cast<int>(i));
  }
  return IndexSet(std::move(out), static_cast<int>(s.size()));
}

IndexSet index_set_T(const Iterate& x, const Eigen::VectorXd& g_s, double gamma, double C) {
  return index_set_T(x.s(), g_s, gamma, C);
}

double StationarityResidual::normalized() const {
  const auto two_m = static_cast<double>(2 * r_ell.size());
  return norm / std::sqrt(two_m);
}

Eigen::VectorXd StationarityResidual::stacked() const {
  Eigen::VectorXd out(r_ell.size() + r_sT.size() + r_sTbar.size());
  out << r_ell, r_sT, r_sTbar;
  return out;
}

StationarityResidual stationarity_residual(const Iterate& x, const Gradient& g, double gamma,
                                           double C) {
  StationarityResidual r;
  r.T = index_set_T(x.s(), g.s, gamma, C);
  const IndexSet Tbar = r.T.complement();
  r.r_ell = g.ell;
  r.r_sT = g.s(r.T.members());
  r.r_sTbar = x.s()(Tbar.members());
  r.norm = std::sqrt(r.r_ell.squaredNorm() + r.r_sT.squaredNorm() + r.r_sTbar.squaredNorm());
  return r;
}

StationarityResidual stationarity_residual(const Iterate& x, const BarrierObjective& barrier,
                                           double gamma, double C) {
  return stationarity_residual(x, grad_h_tau(x, barrier), gamma, C);
}

std::string to_string(StationarityViolation::Clause clause) {
  switch (clause) {
    case StationarityViolation::Clause::GradientEll: return "gradient-ell";
    case StationarityViolation::Clause::GradientSupport: return "gradient-on-support";
    case StationarityViolation::Clause::SupportMagnitude: return "support-magnitude";
    case StationarityViolation::Clause::GradientOffSupport: return "gradient-off-support";
  }
  return "unknown";
}

StationarityReport check_gamma_stationary(const Iterate& x, const Gradient& g, double gamma,
                                          double C, double tol) {
  using Clause = StationarityViolation::Clause;
  const double on_bound = hard_threshold(gamma, C);
  const double off_bound = std::sqrt(2.0 * C / gamma);
  StationarityReport report;
  auto flag = [&](Clause c, Eigen::Index i, double value, double bound) {
    report.violations.push_back({c, static_cast<int>(i), value, bound});
  };
  for (Eigen::Index i = 0; i < g.ell.size(); ++i) {
    if (std::abs(g.ell[i]) > tol) flag(Clause::GradientEll, i, g.ell[i], 0.0);
  }
  const auto& s = x.s();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] != 0.0) {
      if (std::abs(g.s[i]) > tol) flag(Clause::GradientSupport, i, g.s[i], 0.0);
      if (std::abs(s[i]) < on_bound - tol) flag(Clause::SupportMagnitude, i, s[i], on_bound);
    } else if (std::abs(g.s[i]) > off_bound + tol) {
      flag(Clause::GradientOffSupport, i, g.s[i], off_bound);
    }
  }
  report.is_stationary = report.violations.empty();
  return report;
}

StationarityReport check_gamma_stationary(const Iterate& x, const BarrierObjective& barrier,
                                          double gamma, double C, double tol) {
  return check_gamma_stationary(x, grad_h_tau(x, barrier), gamma, C, tol);
}

}  // namespace l0fa
