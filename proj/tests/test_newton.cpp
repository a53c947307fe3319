#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "l0fa/errors.hpp"
#include "l0fa/newton.hpp"
#include "test_support.hpp"

using namespace l0fa;
using namespace l0fa::testing;

namespace {

std::vector<int> complement_of(const IndexSet& T) { return T.complement().members(); }

IndexSet random_subset(int m, std::mt19937_64& rng, double keep) {
  std::bernoulli_distribution coin(keep);
  std::vector<int> members;
  for (int i = 0; i < m; ++i) {
    if (coin(rng)) members.push_back(i);
  }
  return IndexSet(members, m);
}

// The unreduced system: Hessian rows for ell and s_T, identity rows for s_Tbar.
double full_system_residual(const Eigen::MatrixXd& H, const Gradient& g, const Eigen::VectorXd& s,
                            const IndexSet& T, const Direction& d) {
  const int m = static_cast<int>(s.size());
  Eigen::MatrixXd J = H;
  Eigen::VectorXd rhs = -g.stacked();
  for (int i : complement_of(T)) {
    J.row(m + i).setZero();
    J(m + i, m + i) = 1.0;
    rhs[m + i] = -s[i];
  }
  return (J * d.stacked() - rhs).norm() / std::max(1.0, rhs.norm());
}

struct SmallInstance {
  ProblemData problem;
  BarrierObjective barrier;
  Iterate init;
};

SmallInstance small_instance(std::uint64_t seed, int p, double C, double mu, double tau) {
  std::mt19937_64 rng(seed);
  ProblemData problem(random_spd(p, rng, 1.0), C, mu);
  BarrierObjective barrier(problem, tau);
  const Eigen::MatrixXd half = 0.5 * problem.sigma_check();
  Iterate init = Iterate::from_matrices(problem.basis(), half, half);
  return {problem, barrier, init};
}

}  // namespace

TEST_CASE("reduced Newton solve satisfies the full system") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 2 + trial % 4;
    const ProblemData prob(random_spd(p, rng), 0.7, 1.3);
    const BarrierObjective bar(prob, 0.2);
    const Iterate x = random_iterate(prob.basis(), rng);
    const Gradient g = grad_h_tau(x, bar);
    const Eigen::MatrixXd H = hessian_h_tau(x, bar);
    const IndexSet T = random_subset(prob.m(), rng, 0.5);
    const Direction d = newton_direction(x, g, H, T);
    CHECK(d.kind == DirectionKind::Newton);
    CHECK(full_system_residual(H, g, x.s(), T, d) <= 1e-10);
    for (int i : complement_of(T)) CHECK(d.d_s[i] == -x.s()[i]);
  }
}

TEST_CASE("empty T reduces to the ell block") {
  std::mt19937_64 rng(18);
  const ProblemData prob(random_spd(3, rng), 1.0, 2.0);
  const BarrierObjective bar(prob, 0.3);
  const int m = prob.m();
  const Iterate x = random_iterate(prob.basis(), rng);
  const Gradient g = grad_h_tau(x, bar);
  const Eigen::MatrixXd H = hessian_h_tau(x, bar);
  const Direction d = newton_direction(x, g, H, IndexSet({}, m));
  CHECK(d.d_s == -x.s());
  const Eigen::VectorXd want =
      H.topLeftCorner(m, m).llt().solve(H.topRightCorner(m, m) * x.s() - g.ell);
  CHECK((d.d_ell - want).norm() <= 1e-10 * std::max(1.0, want.norm()));
  CHECK(full_system_residual(H, g, x.s(), IndexSet({}, m), d) <= 1e-10);
}

TEST_CASE("zero gradient with full T gives a zero direction") {
  const BasisSet basis(2);
  const Iterate x(basis, Eigen::Vector3d(1, 0, 1), Eigen::Vector3d(2, 0.5, 2));
  const Gradient g{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(6, 6) * 3.0;
  const Direction d = newton_direction(x, g, H, IndexSet({0, 1, 2}, 3));
  CHECK(d.stacked().isZero());
}

TEST_CASE("indefinite reduced matrix is a numerical breakdown") {
  const BasisSet basis(1);
  const Iterate x(basis, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1));
  const Gradient g{Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)};
  const Eigen::MatrixXd H = -Eigen::MatrixXd::Identity(2, 2);
  try {
    newton_direction(x, g, H, IndexSet({0}, 1));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NumericalBreakdown);
  }
}

TEST_CASE("descent safeguard examples") {
  const Eigen::Vector3d s(2.0, 0.0, 3.0);
  const IndexSet T({0, 2}, 3);
  Direction zero{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), DirectionKind::Newton};
  CHECK(descent_safeguard(zero, Eigen::Vector3d(1, 2, 3), s, T, 1e-4, 0.5));

  const Eigen::Vector3d g_s(0.4, 0.0, -0.7);
  Direction aligned{Eigen::Vector3d::Zero(), -g_s, DirectionKind::Newton};
  CHECK(descent_safeguard(aligned, g_s, s, T, 1e-4, 0.5));
  Direction ascent{Eigen::Vector3d::Zero(), g_s, DirectionKind::Newton};
  CHECK_FALSE(descent_safeguard(ascent, g_s, s, T, 1e-4, 0.5));

  // a large s_Tbar relaxes the bound
  const Eigen::Vector3d s_off(2.0, 5.0, 3.0);
  Direction ascent_off = ascent;
  ascent_off.d_s[1] = -5.0;
  CHECK(descent_safeguard(ascent_off, g_s, s_off, T, 1e-4, 0.5));
}

TEST_CASE("gradient fallback") {
  std::mt19937_64 rng(19);
  const ProblemData prob(random_spd(3, rng), 1.0, 1.0);
  const BarrierObjective bar(prob, 0.4);
  const Iterate x = random_iterate(prob.basis(), rng);
  const Gradient g = grad_h_tau(x, bar);
  const IndexSet T = random_subset(prob.m(), rng, 0.5);
  const Direction d = fallback_direction(x, g, T);
  CHECK(d.kind == DirectionKind::GradientFallback);
  CHECK(d.d_ell == -g.ell);
  for (int i : T.members()) CHECK(d.d_s[i] == -g.s[i]);
  for (int i : complement_of(T)) CHECK(d.d_s[i] == -x.s()[i]);

  const BasisSet basis(2);
  const Iterate z(basis, Eigen::Vector3d(1, 0, 1), Eigen::Vector3d(1, 0, 1));
  const Gradient zero{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
  CHECK(fallback_direction(z, zero, IndexSet({0, 2}, 3)).stacked().isZero());

  // with s_Tbar = 0 the fallback always passes the safeguard
  const Iterate full(prob.basis(), x.ell(), x.s());
  const IndexSet all = IndexSet({}, prob.m()).complement();
  CHECK(descent_safeguard(fallback_direction(full, g, all), g.s, full.s(), all, 1e-4, 0.05));
}

TEST_CASE("step point zeroes s_Tbar at every alpha") {
  std::mt19937_64 rng(20);
  const BasisSet basis(3);
  const Iterate x = random_iterate(basis, rng);
  const IndexSet T({0, 2, 3, 5}, basis.m());
  Direction d{Eigen::VectorXd::Ones(basis.m()), Eigen::VectorXd::Ones(basis.m()), DirectionKind::Newton};
  for (int i : complement_of(T)) d.d_s[i] = -x.s()[i];
  for (double alpha : {1.0, 0.5, 0.125}) {
    const Iterate y = step_point(basis, x, d, T, alpha);
    CHECK((y.ell() - (x.ell() + alpha * d.d_ell)).norm() <= 1e-15);
    for (int i : T.members()) CHECK(y.s()[i] == doctest::Approx(x.s()[i] + alpha));
    for (int i : complement_of(T)) CHECK(y.s()[i] == 0.0);
  }
}

TEST_CASE("line search with d = 0 accepts the unit step") {
  std::mt19937_64 rng(21);
  const ProblemData prob(random_spd(3, rng), 1.0, 1.0);
  const BarrierObjective bar(prob, 0.4);
  const Iterate x = random_iterate(prob.basis(), rng);
  const Gradient g = grad_h_tau(x, bar);
  const IndexSet all = IndexSet({}, prob.m()).complement();
  const Direction d{Eigen::VectorXd::Zero(prob.m()), Eigen::VectorXd::Zero(prob.m()), DirectionKind::Newton};
  const double h = eval_h_tau(x, bar);
  const LineSearchResult ls = line_search(x, h, g, d, all, bar, NewtonParams{});
  REQUIRE(ls.accepted);
  CHECK(ls.alpha == 1.0);
  CHECK(ls.backtracks == 0);
  CHECK(ls.h_next == h);
}

TEST_CASE("trial points outside the cone are rejected") {
  // L = I, S = I at p = 2; a step of -3 I on ell leaves the cone for alpha > 1/3
  const ProblemData prob(Eigen::MatrixXd::Identity(2, 2) * 2.0, 1.0, 1.0);
  const BarrierObjective bar(prob, 0.2);
  const auto& basis = prob.basis();
  const Eigen::VectorXd eye = basis.to_vec(Eigen::MatrixXd::Identity(2, 2));
  const Iterate x(basis, eye, eye);
  const Gradient g = grad_h_tau(x, bar);
  const IndexSet all({0, 1, 2}, 3);
  const Direction d{-3.0 * eye, Eigen::VectorXd::Zero(3), DirectionKind::Newton};
  CHECK(g.stacked().dot(d.stacked()) < 0.0);
  CHECK(eval_h_tau(step_point(basis, x, d, all, 1.0), bar) == kInfinity);
  CHECK(eval_h_tau(step_point(basis, x, d, all, 0.5), bar) == kInfinity);
  const LineSearchResult ls = line_search(x, eval_h_tau(x, bar), g, d, all, bar, NewtonParams{});
  REQUIRE(ls.accepted);
  CHECK(ls.alpha <= 0.25);
  CHECK(ls.backtracks >= 2);
  CHECK(ls.next->strictly_feasible());
}

TEST_CASE("line search gives up after max_backtracks") {
  const ProblemData prob(Eigen::MatrixXd::Identity(2, 2) * 2.0, 1.0, 1.0);
  const BarrierObjective bar(prob, 0.2);
  const auto& basis = prob.basis();
  const Eigen::VectorXd eye = basis.to_vec(Eigen::MatrixXd::Identity(2, 2));
  const Iterate x(basis, eye, eye);
  const Gradient g = grad_h_tau(x, bar);
  // ascent direction: no alpha satisfies the Armijo test
  const Direction d{g.ell, g.s, DirectionKind::Newton};
  NewtonParams params;
  params.max_backtracks = 10;
  const LineSearchResult ls = line_search(x, eval_h_tau(x, bar), g, d, IndexSet({0, 1, 2}, 3), bar, params);
  CHECK_FALSE(ls.accepted);
  CHECK_FALSE(ls.next.has_value());
}

TEST_CASE("parameter validation names the field") {
  NewtonParams params;
  params.sigma = 0.7;
  try {
    params.validate();
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
    CHECK(std::string(e.what()).find("sigma") != std::string::npos);
  }
  params = NewtonParams{};
  params.beta = 1.0;
  CHECK_THROWS_AS(params.validate(), Error);
  params = NewtonParams{};
  params.gamma = -1.0;
  CHECK_THROWS_AS(params.validate(), Error);
}

TEST_CASE("inner solve properties on small instances") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const SmallInstance inst = small_instance(seed, 4, 0.02, 2.0, 0.05);
    NewtonParams params;
    params.gamma = 0.05;
    int unit_steps = 0;
    bool feasible = true, monotone = true, contained = true;
    const auto observer = [&](const NewtonStep& step) {
      feasible = feasible && step.after.strictly_feasible();
      monotone = monotone && step.h_after <= step.h_before;
      if (step.alpha == 1.0) {
        ++unit_steps;
        for (int i : support_of(step.after.s()).members()) contained = contained && step.T.contains(i);
      }
    };
    const InnerSolveResult res = solve_tau_min(inst.init, inst.barrier, params, {}, observer);
    CAPTURE(seed);
    REQUIRE(res.status == SolveStatus::Converged);
    CHECK(res.final_residual <= 1e-4);
    CHECK(feasible);
    CHECK(monotone);
    CHECK(contained);
    CHECK(unit_steps > 0);
    CHECK(res.solution.strictly_feasible());

    // trace: one row per iteration plus the terminal row, h nonincreasing
    REQUIRE(res.trace.rows.size() == static_cast<std::size_t>(res.iterations + 1));
    CHECK(res.trace.step_count() == res.iterations);
    CHECK(res.trace.rows.back().direction_kind == DirectionKind::None);
    CHECK(res.trace.rows.back().residual_normalized == res.final_residual);
    for (std::size_t k = 1; k < res.trace.rows.size(); ++k) {
      CHECK(res.trace.rows[k].objective_h_tau <= res.trace.rows[k - 1].objective_h_tau);
      CHECK(res.trace.rows[k].wall_time_ns >= res.trace.rows[k - 1].wall_time_ns);
    }

    // the returned point is gamma-stationary to within the stopping tolerance
    CHECK(check_gamma_stationary(res.solution, inst.barrier, params.gamma, inst.problem.C(), 1e-3).is_stationary);

    // restarting from the solution converges immediately
    const InnerSolveResult again = solve_tau_min(res.solution, inst.barrier, params);
    CHECK(again.status == SolveStatus::Converged);
    CHECK(again.iterations <= 1);
  }
}

TEST_CASE("residual near a root grows linearly with a perturbation") {
  const SmallInstance inst = small_instance(5, 3, 0.02, 2.0, 0.05);
  NewtonParams params;
  params.residual_tol = 1e-9;
  const InnerSolveResult res = solve_tau_min(inst.init, inst.barrier, params);
  REQUIRE(res.status == SolveStatus::Converged);
  const Iterate& root = res.solution;
  const auto supp = support_of(root.s()).members();
  REQUIRE_FALSE(supp.empty());
  std::vector<double> ratios;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    Eigen::VectorXd s = root.s();
    s[supp.front()] += eps;
    const Iterate moved(inst.problem.basis(), root.ell(), s);
    const double r = stationarity_residual(moved, inst.barrier, params.gamma, inst.problem.C()).norm;
    ratios.push_back(r / eps);
  }
  CHECK(ratios[0] > 0.0);
  CHECK(ratios[2] == doctest::Approx(ratios[1]).epsilon(0.05));
  CHECK(ratios[1] == doctest::Approx(ratios[0]).epsilon(0.05));
}

TEST_CASE("infeasible start is rejected") {
  const SmallInstance inst = small_instance(6, 3, 0.02, 2.0, 0.05);
  const Iterate bad(inst.problem.basis(), -inst.init.ell(), inst.init.s());
  CHECK_THROWS_AS(solve_tau_min(bad, inst.barrier, NewtonParams{}), Error);
}

TEST_CASE("iteration cap is reported") {
  const SmallInstance inst = small_instance(7, 4, 0.02, 2.0, 0.05);
  NewtonParams params;
  params.max_inner_iters = 1;
  const InnerSolveResult res = solve_tau_min(inst.init, inst.barrier, params);
  CHECK(res.status == SolveStatus::IterationCap);
  CHECK(res.iterations == 1);
  CHECK(res.trace.rows.size() == 2u);
}
