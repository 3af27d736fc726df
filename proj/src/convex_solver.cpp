#include "convex_solver.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace hdnoma {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;
}  // namespace

double SmoothConstraint::value(const Eigen::VectorXd& x) const {
  double v = alpha.dot(x) + beta;
  for (const LogSumTerm& t : logs) {
    double arg = t.a.dot(x) + t.b;
    if (!(arg > 0.0)) return kInf;
    v -= std::log2(arg);
  }
  return v;
}

bool SmoothConstraint::in_domain(const Eigen::VectorXd& x) const {
  for (const LogSumTerm& t : logs)
    if (!(t.a.dot(x) + t.b > 0.0)) return false;
  return true;
}

Eigen::VectorXd SmoothConstraint::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = alpha;
  for (const LogSumTerm& t : logs) {
    double arg = t.a.dot(x) + t.b;
    g.noalias() -= t.a / (kLn2 * arg);
  }
  return g;
}

void SmoothConstraint::add_curvature(const Eigen::VectorXd& x, double weight,
                                     Eigen::MatrixXd& h) const {
  for (const LogSumTerm& t : logs) {
    double arg = t.a.dot(x) + t.b;
    h.noalias() += (weight / (kLn2 * arg * arg)) * (t.a * t.a.transpose());
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

// Barrier value of minimize -c'x: F_t(x) = -t c'x - sum ln(-g_i).
double barrier_value(const ConvexProblem& p, const Eigen::VectorXd& x, double t) {
  double f = -t * p.c.dot(x);
  for (const SmoothConstraint& con : p.ineqs) {
    double g = con.value(x);
    if (!(g < 0.0)) return kInf;
    f -= std::log(-g);
  }
  return f;
}

struct CenterResult {
  bool ok = true;
  int steps = 0;
};

// Newton's method for the centering problem at fixed t, restricted to
// eq_A x = eq_b (x must satisfy it on entry). Single-variable linear
// constraints (boxes, sign bounds) only touch the Hessian diagonal and are
// handled without forming their outer products.
CenterResult center(const ConvexProblem& p, Eigen::VectorXd& x, double t,
                    const SolverOptions& opts) {
  const int n = p.dim();
  const int ne = int(p.eq_A.rows());
  CenterResult res;

  std::vector<std::pair<int, const SmoothConstraint*>> boxes;  // (variable, constraint)
  std::vector<const SmoothConstraint*> general;
  for (const SmoothConstraint& con : p.ineqs) {
    int nz = -1;
    bool single = con.logs.empty();
    if (single)
      for (int v = 0; v < n; ++v)
        if (con.alpha(v) != 0.0) {
          if (nz >= 0) {
            single = false;
            break;
          }
          nz = v;
        }
    if (single && nz >= 0)
      boxes.push_back({nz, &con});
    else
      general.push_back(&con);
  }

  for (int it = 0; it < opts.max_newton; ++it) {
    Eigen::VectorXd grad = -t * p.c;
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
    for (auto [v, con] : boxes) {
      double a = con->alpha(v);
      double g = a * x(v) + con->beta;
      double inv = 1.0 / (-g);
      grad(v) += inv * a;
      hess(v, v) += inv * inv * a * a;
    }
    for (const SmoothConstraint* conp : general) {
      const SmoothConstraint& con = *conp;
      double g = con.value(x);
      Eigen::VectorXd cg = con.gradient(x);
      double inv = 1.0 / (-g);
      grad.noalias() += inv * cg;
      hess.noalias() += (inv * inv) * (cg * cg.transpose());
      con.add_curvature(x, inv, hess);
    }
    double reg = 1e-12 * (1.0 + hess.trace() / n);
    hess.diagonal().array() += reg;

    Eigen::VectorXd dx(n);
    if (ne == 0) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      if (ldlt.info() != Eigen::Success) {
        res.ok = false;
        return res;
      }
      dx = ldlt.solve(-grad);
    } else {
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + ne, n + ne);
      kkt.topLeftCorner(n, n) = hess;
      kkt.topRightCorner(n, ne) = p.eq_A.transpose();
      kkt.bottomLeftCorner(ne, n) = p.eq_A;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + ne);
      rhs.head(n) = -grad;
      Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
      dx = sol.head(n);
    }

    double decrement = -grad.dot(dx);
    if (!(decrement > 0.0) || !std::isfinite(decrement)) {
      // At (numerical) optimality the decrement underflows; treat as centered.
      return res;
    }
    if (0.5 * decrement <= opts.newton_tol) return res;

    double f0 = barrier_value(p, x, t);
    double alpha = 1.0;
    bool stepped = false;
    while (alpha > 1e-13) {
      Eigen::VectorXd cand = x + alpha * dx;
      double f1 = barrier_value(p, cand, t);
      if (f1 <= f0 - 0.25 * alpha * decrement) {
        x = cand;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    ++res.steps;
    if (!stepped) return res;  // stalled at numerical precision
  }
  return res;
}

struct BarrierOutcome {
  bool ok = true;
  double t_final = 1.0;
  int newton_steps = 0;
  bool hit_cap = false;
  bool early_exit = false;
};

template <typename EarlyExit>
BarrierOutcome run_barrier(const ConvexProblem& p, Eigen::VectorXd& x,
                           const SolverOptions& opts, EarlyExit early) {
  BarrierOutcome out;
  const double m = double(p.ineqs.size());
  double t = 1.0;
  for (int round = 0; round < opts.max_centerings; ++round) {
    CenterResult c = center(p, x, t, opts);
    out.newton_steps += c.steps;
    if (!c.ok) {
      out.ok = false;
      return out;
    }
    if (std::abs(p.c.dot(x)) > opts.objective_cap) {
      out.hit_cap = true;
      out.t_final = t;
      return out;
    }
    if (early(x)) {
      out.early_exit = true;
      out.t_final = t;
      return out;
    }
    if (m / t <= opts.gap_tol) {
      out.t_final = t;
      return out;
    }
    t *= opts.barrier_mu;
  }
  out.ok = false;  // gap target not reached
  out.t_final = t;
  return out;
}

double equality_violation(const ConvexProblem& p, const Eigen::VectorXd& x) {
  if (p.eq_A.rows() == 0) return 0.0;
  return (p.eq_A * x - p.eq_b).cwiseAbs().maxCoeff();
}

void fill_residuals(const ConvexProblem& p, Solution& sol, double t) {
  const int n = p.dim();
  sol.ineq_duals.clear();
  Eigen::VectorXd r = -p.c;
  double feas = equality_violation(p, sol.x);
  double slack = 0.0;
  for (const SmoothConstraint& con : p.ineqs) {
    double g = con.value(sol.x);
    feas = std::max(feas, g);
    double lambda = g < 0.0 ? 1.0 / (t * (-g)) : 0.0;
    sol.ineq_duals.push_back(lambda);
    r.noalias() += lambda * con.gradient(sol.x);
    slack = std::max(slack, lambda * (-g));
  }
  if (p.eq_A.rows() > 0) {
    // best multiplier for the equality rows
    Eigen::MatrixXd aat = p.eq_A * p.eq_A.transpose();
    Eigen::VectorXd z = aat.ldlt().solve(p.eq_A * r);
    r.noalias() -= p.eq_A.transpose() * z;
  }
  sol.stationarity = n > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
  sol.primal_feasibility = std::max(0.0, feas);
  sol.comp_slackness = slack;
}

}  // namespace

Solution solve_convex_subproblem(const ConvexProblem& prob, const Eigen::VectorXd& x0,
                                 const SolverOptions& opts) {
  Solution sol;
  sol.x = x0;
  const int n = prob.dim();
  if (int(x0.size()) != n) {
    sol.message = "start dimension mismatch";
    return sol;
  }
  for (const SmoothConstraint& con : prob.ineqs)
    if (!con.in_domain(x0)) {
      sol.message = "start outside a log domain";
      return sol;
    }
  if (equality_violation(prob, x0) > 1e-8) {
    sol.message = "start violates equality constraints";
    return sol;
  }

  bool strict = true;
  for (const SmoothConstraint& con : prob.ineqs)
    if (!(con.value(x0) < 0.0)) {
      strict = false;
      if (con.hard) {
        sol.message = "hard constraint not strict at start";
        return sol;
      }
    }

  Eigen::VectorXd x = x0;
  int total_newton = 0;

  if (!strict) {
    // Feasibility phase: minimize s with soft constraints relaxed to
    // g_i(x) <= s; hard constraints keep their exact form.
    ConvexProblem ph;
    ph.c = Eigen::VectorXd::Zero(n + 1);
    ph.c(n) = -1.0;
    if (prob.eq_A.rows() > 0) {
      ph.eq_A = Eigen::MatrixXd::Zero(prob.eq_A.rows(), n + 1);
      ph.eq_A.leftCols(n) = prob.eq_A;
      ph.eq_b = prob.eq_b;
    } else {
      ph.eq_A.resize(0, n + 1);
      ph.eq_b.resize(0);
    }
    double worst = 0.0;
    for (const SmoothConstraint& con : prob.ineqs) {
      SmoothConstraint c2 = con;
      c2.alpha.conservativeResize(n + 1);
      c2.alpha(n) = con.hard ? 0.0 : -1.0;
      for (LogSumTerm& t : c2.logs) {
        t.a.conservativeResize(n + 1);
        t.a(n) = 0.0;
      }
      ph.ineqs.push_back(std::move(c2));
      if (!con.hard) worst = std::max(worst, con.value(x0));
    }
    Eigen::VectorXd xp(n + 1);
    xp.head(n) = x0;
    xp(n) = worst + 1.0;

    const double margin = opts.phase1_margin;
    BarrierOutcome ph_out =
        run_barrier(ph, xp, opts, [n, margin](const Eigen::VectorXd& y) {
          return y(n) <= -margin;
        });
    total_newton += ph_out.newton_steps;
    if (!ph_out.ok) {
      sol.status = SolveStatus::numerical_failure;
      sol.message = "feasibility phase failed to center";
      return sol;
    }
    if (!ph_out.early_exit && xp(n) > -margin) {
      sol.status = SolveStatus::infeasible;
      sol.x = xp.head(n);
      sol.message = "no strictly feasible point (best slack " + std::to_string(xp(n)) + ")";
      return sol;
    }
    x = xp.head(n);
  }

  BarrierOutcome out = run_barrier(prob, x, opts, [](const Eigen::VectorXd&) {
    return false;
  });
  total_newton += out.newton_steps;
  sol.x = x;
  sol.newton_steps = total_newton;
  sol.objective = prob.c.dot(x);
  if (out.hit_cap) {
    sol.status = SolveStatus::unbounded;
    sol.message = "objective exceeded cap";
    return sol;
  }
  if (!out.ok) {
    sol.status = SolveStatus::max_iterations;
    fill_residuals(prob, sol, out.t_final);
    sol.message = "barrier did not reach gap target";
    return sol;
  }
  sol.status = SolveStatus::optimal;
  fill_residuals(prob, sol, out.t_final);
  return sol;
}

}  // namespace hdnoma
