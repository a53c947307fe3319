#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "l0fa/errors.hpp"
#include "l0fa/prox.hpp"
#include "test_support.hpp"

using namespace l0fa;

TEST_CASE("scalar hard thresholding at threshold 1") {
  CHECK(hard_threshold(0.5, 1.0) == 1.0);
  CHECK(prox_l0_scalar(0.5, 0.5, 1.0) == 0.0);
  CHECK(prox_l0_scalar(1.5, 0.5, 1.0) == 1.5);
  CHECK(prox_l0_scalar(-1.5, 0.5, 1.0) == -1.5);
  CHECK(prox_l0_scalar(1.0, 0.5, 1.0) == 0.0);
  CHECK(prox_l0_scalar(-1.0, 0.5, 1.0) == 0.0);
  CHECK(prox_l0_scalar(0.0, 0.5, 1.0) == 0.0);
  CHECK(prox_l0_scalar(std::nextafter(1.0, 2.0), 0.5, 1.0) == std::nextafter(1.0, 2.0));
}

TEST_CASE("invalid prox parameters throw") {
  CHECK_THROWS_AS(prox_l0_scalar(1.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(prox_l0_scalar(1.0, 1.0, -1.0), Error);
  CHECK_THROWS_AS(hard_threshold(std::numeric_limits<double>::quiet_NaN(), 1.0), Error);
}

TEST_CASE("scalar prox agrees with the two-candidate minimizer") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> x_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> log_dist(-4.0, 2.0);
  int mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double x = x_dist(rng);
    const double gamma = std::pow(10.0, log_dist(rng));
    const double C = std::pow(10.0, log_dist(rng));
    const double keep = C;                          // candidate v = x
    const double drop = x * x / (2.0 * gamma);      // candidate v = 0
    const double want = drop <= keep ? 0.0 : x;     // tie goes to 0
    if (prox_l0_scalar(x, gamma, C) != want) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("vector prox") {
  const Eigen::Vector2d x(0.5, 1.5);
  CHECK(prox_l0_vec(x, 0.5, 1.0) == Eigen::Vector2d(0.0, 1.5));
  CHECK(prox_l0_vec(Eigen::VectorXd::Zero(4), 0.5, 1.0).isZero());

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd v = l0fa::testing::random_matrix(12, 1, rng);
    const Eigen::VectorXd once = prox_l0_vec(v, 0.3, 0.8);
    CHECK(prox_l0_vec(once, 0.3, 0.8) == once);
    for (Eigen::Index i = 0; i < v.size(); ++i) CHECK(once[i] == prox_l0_scalar(v[i], 0.3, 0.8));
  }
}

TEST_CASE("IndexSet basics") {
  const IndexSet T({4, 1, 1, 3}, 6);
  CHECK(T.members() == std::vector<int>{1, 3, 4});
  CHECK(T.contains(3));
  CHECK_FALSE(T.contains(2));
  CHECK(T.complement().members() == std::vector<int>{0, 2, 5});
  CHECK(T.complement().complement() == T);
  CHECK_THROWS_AS(IndexSet({6}, 6), Error);
  CHECK_THROWS_AS(IndexSet({-1}, 6), Error);
  CHECK(support_of(Eigen::Vector3d(0, 2, 0)).members() == std::vector<int>{1});
}

TEST_CASE("index set T membership") {
  // threshold 1 at gamma = 0.5, C = 1
  CHECK(index_set_T(Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Zero(1), 0.5, 1.0).size() == 1);
  CHECK(index_set_T(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.1), 0.5, 1.0).size() == 0);
  // boundary is inclusive
  CHECK(index_set_T(Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(1), 0.5, 1.0).size() == 1);
  const Eigen::VectorXd s = Eigen::Vector4d(1.0, -3.0, 2.0, -1.5);
  CHECK(index_set_T(s, Eigen::VectorXd::Zero(4), 0.5, 1.0).size() == 4);
  // a large gradient can pull a zero coordinate into T
  CHECK(index_set_T(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, -3.0), 0.5, 1.0).size() == 1);
  CHECK_THROWS_AS(index_set_T(s, Eigen::VectorXd::Zero(3), 0.5, 1.0), Error);
}

namespace {

Iterate diag_point(const BasisSet& basis, const Eigen::VectorXd& s) {
  return Iterate(basis, basis.to_vec(Eigen::MatrixXd::Identity(basis.p(), basis.p())), s);
}

}  // namespace

TEST_CASE("residual of a root is zero") {
  const BasisSet basis(2);
  const Eigen::Vector3d s(2.0, 0.0, 3.0);
  const Iterate x = diag_point(basis, s);
  Gradient g{Eigen::Vector3d::Zero(), Eigen::Vector3d(0.0, 0.5, 0.0)};
  const StationarityResidual r = stationarity_residual(x, g, 0.5, 1.0);
  CHECK(r.T.members() == std::vector<int>{0, 2});
  CHECK(r.norm == 0.0);
  CHECK(r.normalized() == 0.0);
}

TEST_CASE("residual blocks and normalization") {
  const BasisSet basis(2);
  const Eigen::Vector3d s(2.0, 0.4, 3.0);
  const Iterate x = diag_point(basis, s);
  Gradient g{Eigen::Vector3d(0.1, 0.0, 0.0), Eigen::Vector3d(0.3, 0.0, 0.0)};
  const StationarityResidual r = stationarity_residual(x, g, 0.5, 1.0);
  CHECK(r.T.members() == std::vector<int>{0, 2});
  CHECK(r.r_sTbar == Eigen::VectorXd::Constant(1, 0.4));
  const double want = std::sqrt(0.01 + 0.09 + 0.16);
  CHECK(r.norm == doctest::Approx(want));
  CHECK(r.normalized() == doctest::Approx(want / std::sqrt(6.0)));
  CHECK(r.stacked().norm() == doctest::Approx(want));
}

TEST_CASE("stationarity clauses") {
  using Clause = StationarityViolation::Clause;
  const BasisSet basis(2);
  const double gamma = 0.5, C = 1.0;  // on-support bound 1, off-support bound 2

  SUBCASE("root passes") {
    const Iterate x = diag_point(basis, Eigen::Vector3d(2.0, 0.0, 3.0));
    const Gradient g{Eigen::Vector3d::Zero(), Eigen::Vector3d(0.0, 1.5, 0.0)};
    CHECK(check_gamma_stationary(x, g, gamma, C).is_stationary);
  }
  SUBCASE("small supported coordinate fails the magnitude clause") {
    const Iterate x = diag_point(basis, Eigen::Vector3d(2.0, 0.5, 3.0));
    const Gradient g{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
    const StationarityReport rep = check_gamma_stationary(x, g, gamma, C);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].clause == Clause::SupportMagnitude);
    CHECK(rep.violations[0].index == 1);
    CHECK(to_string(rep.violations[0].clause) == "support-magnitude");
  }
  SUBCASE("zero s with bounded gradient passes") {
    const Iterate x = diag_point(basis, Eigen::Vector3d::Zero());
    const Gradient g{Eigen::Vector3d::Zero(), Eigen::Vector3d(2.0, -1.0, 0.3)};
    CHECK(check_gamma_stationary(x, g, gamma, C).is_stationary);
  }
  SUBCASE("each failing clause is reported") {
    const Iterate x = diag_point(basis, Eigen::Vector3d(2.0, 0.0, 3.0));
    const Gradient g{Eigen::Vector3d(0.0, 1e-3, 0.0), Eigen::Vector3d(0.0, 2.5, 1e-2)};
    const StationarityReport rep = check_gamma_stationary(x, g, gamma, C);
    CHECK_FALSE(rep.is_stationary);
    REQUIRE(rep.violations.size() == 3);
    CHECK(rep.violations[0].clause == Clause::GradientEll);
    CHECK(rep.violations[1].clause == Clause::GradientOffSupport);
    CHECK(rep.violations[2].clause == Clause::GradientSupport);
    // the same point passes under a looser tolerance on the smooth clauses
    CHECK(check_gamma_stationary(x, g, gamma, C, 0.6).is_stationary);
  }
}
