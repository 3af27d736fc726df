#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace hdnoma {

// One smooth convex inequality of the form
//   alpha' x + beta - sum_m log2(a_m' x + b_m) <= 0.
// With no log terms this is a plain linear constraint. The log arguments must
// stay positive; the solver treats them as part of the constraint domain.
struct LogSumTerm {
  Eigen::VectorXd a;
  double b = 0.0;
};

struct SmoothConstraint {
  Eigen::VectorXd alpha;
  double beta = 0.0;
  std::vector<LogSumTerm> logs;
  // Hard constraints must hold strictly at the supplied start and are not
  // relaxed during feasibility recovery (boxes, sign constraints, slack-built
  // constraints).
  bool hard = false;

  double value(const Eigen::VectorXd& x) const;
  bool in_domain(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  // h += weight * (hessian of the constraint function)
  void add_curvature(const Eigen::VectorXd& x, double weight, Eigen::MatrixXd& h) const;
};

// maximize c' x  subject to  ineqs(x) <= 0 and eq_A x = eq_b.
struct ConvexProblem {
  Eigen::VectorXd c;
  std::vector<SmoothConstraint> ineqs;
  Eigen::MatrixXd eq_A;  // 0 x n when absent
  Eigen::VectorXd eq_b;

  int dim() const { return int(c.size()); }
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations, numerical_failure };

const char* to_string(SolveStatus s);

struct SolverOptions {
  double gap_tol = 1e-9;       // final duality-gap target m/t
  double barrier_mu = 30.0;    // barrier parameter growth
  double newton_tol = 1e-11;   // squared Newton decrement / 2
  int max_newton = 80;         // per centering
  int max_centerings = 64;
  double phase1_margin = 1e-9; // slack proving strict feasibility
  double objective_cap = 1e12; // beyond this the problem is declared unbounded
};

struct Solution {
  SolveStatus status = SolveStatus::numerical_failure;
  Eigen::VectorXd x;
  double objective = 0.0;
  std::vector<double> ineq_duals;
  // KKT residuals at the returned point.
  double stationarity = 0.0;
  double primal_feasibility = 0.0;  // max(0, g_i) and equality violation
  double comp_slackness = 0.0;      // max_i lambda_i * (-g_i)
  int newton_steps = 0;
  std::string message;
};

// Log-barrier interior-point method. `x0` must satisfy the equalities and the
// domains of all log terms; if it is not strictly feasible for the
// inequalities, a feasibility phase runs first (hard constraints must already
// be strict). Deterministic for fixed inputs.
Solution solve_convex_subproblem(const ConvexProblem& prob, const Eigen::VectorXd& x0,
                                 const SolverOptions& opts = {});

}  // namespace hdnoma
