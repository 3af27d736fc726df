#include <doctest.h>

#include "convex_solver.hpp"

using namespace hdnoma;

namespace {

SmoothConstraint linear(const std::vector<double>& alpha, double beta, bool hard = true) {
  SmoothConstraint c;
  c.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), long(alpha.size()));
  c.beta = beta;
  c.hard = hard;
  return c;
}

}  // namespace

TEST_CASE("monotone toy: maximize t under t <= log2(1+x), 0 <= x <= 3") {
  ConvexProblem p;
  p.c = Eigen::Vector2d(0.0, 1.0);
  p.eq_A.resize(0, 2);
  p.eq_b.resize(0);

  SmoothConstraint dc;  // t - log2(1+x) <= 0
  dc.alpha = Eigen::Vector2d(0.0, 1.0);
  LogSumTerm lt;
  lt.a = Eigen::Vector2d(1.0, 0.0);
  lt.b = 1.0;
  dc.logs.push_back(lt);
  p.ineqs.push_back(dc);
  p.ineqs.push_back(linear({-1.0, 0.0}, 0.0));
  p.ineqs.push_back(linear({1.0, 0.0}, -3.0));

  Solution s = solve_convex_subproblem(p, Eigen::Vector2d(1.0, 0.5));
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.x(0) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(s.x(1) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s.primal_feasibility <= 1e-8);
  CHECK(s.comp_slackness <= 1e-6);
  CHECK(s.stationarity <= 1e-6);
}

TEST_CASE("two-variable linear program lands on the vertex") {
  // maximize x + y s.t. x <= 2, y <= 1, x + 2y <= 3, x,y >= 0 -> (2, 0.5)
  ConvexProblem p;
  p.c = Eigen::Vector2d(1.0, 1.0);
  p.eq_A.resize(0, 2);
  p.eq_b.resize(0);
  p.ineqs.push_back(linear({1.0, 0.0}, -2.0));
  p.ineqs.push_back(linear({0.0, 1.0}, -1.0));
  p.ineqs.push_back(linear({1.0, 2.0}, -3.0));
  p.ineqs.push_back(linear({-1.0, 0.0}, 0.0));
  p.ineqs.push_back(linear({0.0, -1.0}, 0.0));

  SolverOptions opts;
  opts.gap_tol = 1e-10;
  Solution s = solve_convex_subproblem(p, Eigen::Vector2d(0.5, 0.5), opts);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(std::abs(s.x(0) - 2.0) <= 1e-8);
  CHECK(std::abs(s.x(1) - 0.5) <= 1e-8);
}

TEST_CASE("equality-constrained maximization") {
  // maximize x0 s.t. x0 + x1 = 1, x in [0,1]^2 -> (1, 0)
  ConvexProblem p;
  p.c = Eigen::Vector2d(1.0, 0.0);
  p.eq_A.resize(1, 2);
  p.eq_A << 1.0, 1.0;
  p.eq_b.resize(1);
  p.eq_b << 1.0;
  p.ineqs.push_back(linear({-1.0, 0.0}, 0.0));
  p.ineqs.push_back(linear({0.0, -1.0}, 0.0));
  p.ineqs.push_back(linear({1.0, 0.0}, -1.0));
  p.ineqs.push_back(linear({0.0, 1.0}, -1.0));

  Solution s = solve_convex_subproblem(p, Eigen::Vector2d(0.5, 0.5));
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.x(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(s.x(0) + s.x(1) - 1.0) <= 1e-9);
}

TEST_CASE("feasibility phase recovers from an infeasible start") {
  // x >= 2 (soft), x <= 3; start at 0.5
  ConvexProblem p;
  p.c = Eigen::VectorXd::Constant(1, -1.0);  // minimize x
  p.eq_A.resize(0, 1);
  p.eq_b.resize(0);
  p.ineqs.push_back(linear({-1.0}, 2.0, false));
  p.ineqs.push_back(linear({1.0}, -3.0));

  Solution s = solve_convex_subproblem(p, Eigen::VectorXd::Constant(1, 0.5));
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.x(0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("infeasible systems are reported, not solved") {
  // x >= 2 and x <= 1
  ConvexProblem p;
  p.c = Eigen::VectorXd::Constant(1, 1.0);
  p.eq_A.resize(0, 1);
  p.eq_b.resize(0);
  p.ineqs.push_back(linear({-1.0}, 2.0, false));
  p.ineqs.push_back(linear({1.0}, -1.0, false));
  Solution s = solve_convex_subproblem(p, Eigen::VectorXd::Constant(1, 0.0));
  CHECK(s.status == SolveStatus::infeasible);
  CHECK(!s.message.empty());
}

TEST_CASE("unbounded problems are flagged") {
  ConvexProblem p;
  p.c = Eigen::VectorXd::Constant(1, 1.0);
  p.eq_A.resize(0, 1);
  p.eq_b.resize(0);
  p.ineqs.push_back(linear({-1.0}, 0.0));  // x >= 0 only
  Solution s = solve_convex_subproblem(p, Eigen::VectorXd::Constant(1, 1.0));
  CHECK(s.status == SolveStatus::unbounded);
}

TEST_CASE("deterministic: identical inputs give identical iterates") {
  ConvexProblem p;
  p.c = Eigen::Vector2d(0.3, 0.7);
  p.eq_A.resize(0, 2);
  p.eq_b.resize(0);
  SmoothConstraint cap;
  cap.alpha = Eigen::Vector2d(0.0, 0.0);
  cap.beta = -4.0;
  for (int i = 0; i < 2; ++i) {
    LogSumTerm lt;
    lt.a = Eigen::Vector2d(i == 0 ? 1.0 : 0.2, i == 0 ? 0.3 : 1.0);
    lt.b = 1.0;
    cap.logs.push_back(lt);
  }
  // 4 - sum log2(...) <= 0 is a lower bound on the logs; flip sign for an
  // upper-bound style region: use -(logs) + 4 <= 0 means logs >= 4
  p.ineqs.push_back(cap);
  p.ineqs.push_back(linear({1.0, 0.0}, -10.0));
  p.ineqs.push_back(linear({0.0, 1.0}, -10.0));
  p.ineqs.push_back(linear({-1.0, 0.0}, 0.0));
  p.ineqs.push_back(linear({0.0, -1.0}, 0.0));

  Eigen::VectorXd x0 = Eigen::Vector2d(8.0, 8.0);
  Solution a = solve_convex_subproblem(p, x0);
  Solution b = solve_convex_subproblem(p, x0);
  REQUIRE(a.status == b.status);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
}
