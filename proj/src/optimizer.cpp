#include "optimizer.hpp"

#include <cmath>
#include <sstream>

namespace hdnoma {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Per-subcarrier interference coefficients normalized by the noise variance,
// so every log argument in the solver is 1 + O(SNR).
struct PowerCoefs {
  Eigen::VectorXd s;  // sum_i g_s(i,k) f_s(i,k) / sigma^2
  Eigen::VectorXd w;  // sum_j g_w(j,k) f_w(j,k) / sigma^2
};

PowerCoefs power_coefs(const RelaxedFactorGraph& F_s, const RelaxedFactorGraph& F_w,
                       const GainTable& g) {
  PowerCoefs c;
  const int K = g.subcarriers();
  c.s.resize(K);
  c.w.resize(K);
  for (int k = 0; k < K; ++k) {
    c.s(k) = (g.strong.col(k).array() * F_s.entries.col(k).array()).sum() / g.noise_var;
    c.w(k) = (g.weak.col(k).array() * F_w.entries.col(k).array()).sum() / g.noise_var;
  }
  return c;
}

double weak_rate_at(const PowerCoefs& c, double p_w) {
  double sr = 0.0;
  for (int k = 0; k < c.w.size(); ++k) sr += std::log2(1.0 + c.w(k) * p_w);
  return sr;
}

// Smallest p_w with weak rate >= target (bisection; the rate is strictly
// increasing whenever any coefficient is positive).
double bisect_weak_power(const PowerCoefs& c, double target, double cap) {
  if (target <= 0.0) return 0.0;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (weak_rate_at(c, mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

SmoothConstraint box_lower(int n, int idx) {
  SmoothConstraint c;
  c.alpha = Eigen::VectorXd::Zero(n);
  c.alpha(idx) = -1.0;
  c.hard = true;
  return c;
}

SmoothConstraint box_upper(int n, int idx, double bound) {
  SmoothConstraint c;
  c.alpha = Eigen::VectorXd::Zero(n);
  c.alpha(idx) = 1.0;
  c.beta = -bound;
  c.hard = true;
  return c;
}

}  // namespace

PowerStepResult solve_p_subproblem(const RelaxedFactorGraph& F_s,
                                   const RelaxedFactorGraph& F_w, double p_s0,
                                   double p_w0, const GainTable& g,
                                   const OptimizerConfig& cfg) {
  const PowerCoefs coef = power_coefs(F_s, F_w, g);
  const int K = g.subcarriers();
  const double P = cfg.max_power_w;
  const double qos = std::max(cfg.qos_threshold, 0.0);

  const double max_row_s = F_s.entries.rowwise().sum().maxCoeff();
  const double max_row_w = F_w.entries.rowwise().sum().maxCoeff();
  const double cap_s = P / std::max(max_row_s, 1e-12);
  const double cap_w = P / std::max(max_row_w, 1e-12);

  if (qos > 0.0 && weak_rate_at(coef, cap_w) < qos) {
    std::ostringstream os;
    os << "weak-group rate floor " << qos << " bit/s/Hz unattainable: at the power cap "
       << cap_w << " W the weak group reaches only " << weak_rate_at(coef, cap_w)
       << " bit/s/Hz";
    throw InfeasibleError(os.str());
  }

  // Strictly feasible start.
  double p_min_w = qos > 0.0 ? bisect_weak_power(coef, qos, cap_w) : 0.0;
  auto clamp = [](double v, double lo, double hi) { return std::min(std::max(v, lo), hi); };
  double p_s = clamp(p_s0, 1e-3 * cap_s, 0.999 * cap_s);
  double window = cap_w - p_min_w;
  double p_w = clamp(p_w0, p_min_w + std::max(1e-9 * std::max(p_min_w, 1e-3 * cap_w),
                                              1e-12 * cap_w),
                     p_min_w + 0.999 * window);
  if (qos <= 0.0) p_w = clamp(p_w0, 1e-9 * cap_w, 0.999 * cap_w);

  auto u1_norm = [&](double ps, double pw) {
    double u = 0.0;
    for (int k = 0; k < K; ++k) u += std::log2(1.0 + coef.s(k) * ps + coef.w(k) * pw);
    return u;
  };
  auto v1_norm = [&](double pw) { return weak_rate_at(coef, pw); };
  auto dv1_dpw = [&](double pw) {
    double d = 0.0;
    for (int k = 0; k < K; ++k) d += coef.w(k) / (kLn2 * (1.0 + coef.w(k) * pw));
    return d;
  };

  const int n = 3;  // (p_s, p_w, t1)
  PowerStepResult res;
  double t1_prev = -std::numeric_limits<double>::infinity();

  for (int n1 = 0; n1 < cfg.max_inner_iters; ++n1) {
    ConvexProblem prob;
    prob.c = Eigen::VectorXd::Zero(n);
    prob.c(2) = 1.0;
    prob.eq_A.resize(0, n);
    prob.eq_b.resize(0);

    // t1 + v1_lin(p) - u1(p) <= 0, linearized at the current iterate
    SmoothConstraint dc;
    double slope = dv1_dpw(p_w);
    dc.alpha = Eigen::VectorXd::Zero(n);
    dc.alpha(1) = slope;
    dc.alpha(2) = 1.0;
    dc.beta = v1_norm(p_w) - slope * p_w;
    for (int k = 0; k < K; ++k) {
      LogSumTerm lt;
      lt.a = Eigen::VectorXd::Zero(n);
      lt.a(0) = coef.s(k);
      lt.a(1) = coef.w(k);
      lt.b = 1.0;
      dc.logs.push_back(std::move(lt));
    }
    dc.hard = true;
    prob.ineqs.push_back(std::move(dc));

    if (qos > 0.0) {
      SmoothConstraint q;
      q.alpha = Eigen::VectorXd::Zero(n);
      q.beta = qos;
      for (int k = 0; k < K; ++k) {
        LogSumTerm lt;
        lt.a = Eigen::VectorXd::Zero(n);
        lt.a(1) = coef.w(k);
        lt.b = 1.0;
        q.logs.push_back(std::move(lt));
      }
      prob.ineqs.push_back(std::move(q));
    }

    // per-user power caps at the current row occupancies
    for (int i = 0; i < F_s.users(); ++i) {
      double rs = F_s.entries.row(i).sum();
      if (rs <= 0.0) continue;
      SmoothConstraint c;
      c.alpha = Eigen::VectorXd::Zero(n);
      c.alpha(0) = rs;
      c.beta = -P;
      c.hard = true;
      prob.ineqs.push_back(std::move(c));
    }
    for (int j = 0; j < F_w.users(); ++j) {
      double rw = F_w.entries.row(j).sum();
      if (rw <= 0.0) continue;
      SmoothConstraint c;
      c.alpha = Eigen::VectorXd::Zero(n);
      c.alpha(1) = rw;
      c.beta = -P;
      c.hard = true;
      prob.ineqs.push_back(std::move(c));
    }
    prob.ineqs.push_back(box_lower(n, 0));
    prob.ineqs.push_back(box_lower(n, 1));

    Eigen::VectorXd x0(n);
    x0 << p_s, p_w, u1_norm(p_s, p_w) - v1_norm(p_w) - 1.0;
    Solution sol = solve_convex_subproblem(prob, x0, cfg.solver);
    if (sol.status == SolveStatus::infeasible)
      throw InfeasibleError("power step infeasible: " + sol.message);
    if (sol.status != SolveStatus::optimal && sol.status != SolveStatus::max_iterations)
      throw std::runtime_error(std::string("power step solver failure: ") +
                               to_string(sol.status) + " " + sol.message);

    p_s = sol.x(0);
    p_w = sol.x(1);
    double t1 = sol.x(2);
    res.t1_trace.push_back(t1);
    res.iterations = n1 + 1;
    double resid = std::abs(t1 - t1_prev) / std::max(1.0, std::abs(t1));
    t1_prev = t1;
    if (n1 > 0 && resid < cfg.inner_tol) break;
  }

  res.p_strong = p_s;
  res.p_weak = p_w;
  res.t1 = t1_prev;
  return res;
}

WeightPair update_weights(const RelaxedFactorGraph& F_s, const RelaxedFactorGraph& F_w,
                          double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("update_weights: epsilon must be > 0");
  WeightPair w;
  w.strong = (F_s.entries.array().abs() + epsilon).inverse();
  w.weak = (F_w.entries.array().abs() + epsilon).inverse();
  return w;
}

Eigen::MatrixXd ones_weights(int users, int subcarriers) {
  return Eigen::MatrixXd::Ones(users, subcarriers);
}

namespace {

struct GraphLayout {
  int js, jw, K, n;
  int s(int i, int k) const { return i * K + k; }
  int w(int j, int k) const { return js * K + j * K + k; }
  int t2() const { return n - 1; }
};

struct GroupPinning {
  bool saturated = false;    // degree floors force every entry to one
  bool rows_pinned = false;  // power cap forces row sums == row_degree
  bool cols_pinned = false;  // counting then forces column sums == col_degree
  double row_cap = 0.0;      // P / p, upper bound on row sums
};

GroupPinning analyze_group(double p, double P, int users, int subcarriers,
                           int row_degree, int col_degree) {
  GroupPinning pin;
  pin.saturated = row_degree == subcarriers || col_degree == users;
  pin.row_cap = p > 1e-300 ? P / p : std::numeric_limits<double>::infinity();
  pin.rows_pinned = !pin.saturated && pin.row_cap <= row_degree * (1.0 + 1e-8);
  pin.cols_pinned =
      pin.rows_pinned && long(users) * row_degree == long(subcarriers) * col_degree;
  return pin;
}

// Scale rows (and, when required, columns) of a positive matrix until the
// sums match the pinned degrees; the blend start is near-feasible so a few
// alternating passes reach machine precision.
void project_to_degrees(Eigen::MatrixXd& f, double row_target, double col_target,
                        bool fix_cols) {
  for (int it = 0; it < 100; ++it) {
    for (int j = 0; j < f.rows(); ++j) f.row(j) *= row_target / f.row(j).sum();
    if (!fix_cols) return;
    for (int k = 0; k < f.cols(); ++k) f.col(k) *= col_target / f.col(k).sum();
    double resid = 0.0;
    for (int j = 0; j < f.rows(); ++j)
      resid = std::max(resid, std::abs(f.row(j).sum() - row_target));
    if (resid < 1e-13) {
      for (int j = 0; j < f.rows(); ++j) f.row(j) *= row_target / f.row(j).sum();
      return;
    }
  }
}

}  // namespace

GraphStepResult solve_F_subproblem(double p_s, double p_w,
                                   const RelaxedFactorGraph& F_s0,
                                   const RelaxedFactorGraph& F_w0,
                                   const WeightPair& weights, const GainTable& g,
                                   const OptimizerConfig& cfg) {
  const GraphLayout L{int(F_s0.users()), int(F_w0.users()), g.subcarriers(),
                      int(F_s0.users()) * g.subcarriers() +
                          int(F_w0.users()) * g.subcarriers() + 1};
  const double P = cfg.max_power_w;
  const double qos = std::max(cfg.qos_threshold, 0.0);
  const double lambda = cfg.penalty_weight;

  // noise-normalized received powers per entry
  Eigen::MatrixXd gs = p_s * g.strong / g.noise_var;
  Eigen::MatrixXd gw = p_w * g.weak / g.noise_var;

  GroupPinning pin_s =
      analyze_group(p_s, P, L.js, L.K, cfg.row_degree_strong, cfg.col_degree_strong);
  GroupPinning pin_w =
      analyze_group(p_w, P, L.jw, L.K, cfg.row_degree_weak, cfg.col_degree_weak);
  if (pin_s.saturated && p_s * L.K > P * (1.0 + 1e-9))
    throw InfeasibleError("assignment step: strong degree floors exceed the power cap");
  if (pin_w.saturated && p_w * L.K > P * (1.0 + 1e-9))
    throw InfeasibleError("assignment step: weak degree floors exceed the power cap");

  auto u2_norm = [&](const Eigen::MatrixXd& fs, const Eigen::MatrixXd& fw) {
    double u = 0.0;
    for (int k = 0; k < L.K; ++k)
      u += std::log2(1.0 + (gs.col(k).array() * fs.col(k).array()).sum() +
                     (gw.col(k).array() * fw.col(k).array()).sum());
    return u;
  };
  auto v2_norm = [&](const Eigen::MatrixXd& fw) {
    double v = 0.0;
    for (int k = 0; k < L.K; ++k)
      v += std::log2(1.0 + (gw.col(k).array() * fw.col(k).array()).sum());
    return v;
  };

  // interior blend target per group
  auto blend_value = [&](const GroupPinning& pin, int users, int row_degree,
                         int col_degree) {
    double lo = std::max(double(row_degree) / L.K, double(col_degree) / users);
    if (pin.rows_pinned) return double(row_degree) / L.K;
    double hi = std::min(1.0, pin.row_cap / L.K);
    if (hi <= lo * (1.0 + 1e-9)) return double(row_degree) / L.K;
    return lo + 0.25 * (hi - lo);
  };
  const double rho_s = blend_value(pin_s, L.js, cfg.row_degree_strong, cfg.col_degree_strong);
  const double rho_w = blend_value(pin_w, L.jw, cfg.row_degree_weak, cfg.col_degree_weak);

  GraphStepResult res;
  Eigen::MatrixXd fs = F_s0.entries;
  Eigen::MatrixXd fw = F_w0.entries;
  double obj_prev = -std::numeric_limits<double>::infinity();

  for (int n2 = 0; n2 < cfg.max_inner_iters; ++n2) {
    ConvexProblem prob;
    prob.c = Eigen::VectorXd::Zero(L.n);
    prob.c(L.t2()) = 1.0;
    for (int i = 0; i < L.js; ++i)
      for (int k = 0; k < L.K; ++k) prob.c(L.s(i, k)) = -lambda * weights.strong(i, k);
    for (int j = 0; j < L.jw; ++j)
      for (int k = 0; k < L.K; ++k) prob.c(L.w(j, k)) = -lambda * weights.weak(j, k);

    // equality rows for pinned degrees (dropping one redundant column row);
    // saturated groups are fixed entrywise at one
    std::vector<Eigen::VectorXd> eq_rows;
    std::vector<double> eq_rhs;
    auto add_group_equalities = [&](const GroupPinning& pin, int users, int row_degree,
                                    int col_degree, auto idx) {
      if (pin.saturated) {
        for (int j = 0; j < users; ++j)
          for (int k = 0; k < L.K; ++k) {
            Eigen::VectorXd r = Eigen::VectorXd::Zero(L.n);
            r(idx(j, k)) = 1.0;
            eq_rows.push_back(std::move(r));
            eq_rhs.push_back(1.0);
          }
        return;
      }
      if (!pin.rows_pinned) return;
      for (int j = 0; j < users; ++j) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(L.n);
        for (int k = 0; k < L.K; ++k) r(idx(j, k)) = 1.0;
        eq_rows.push_back(std::move(r));
        eq_rhs.push_back(row_degree);
      }
      if (pin.cols_pinned) {
        for (int k = 0; k + 1 < L.K; ++k) {
          Eigen::VectorXd r = Eigen::VectorXd::Zero(L.n);
          for (int j = 0; j < users; ++j) r(idx(j, k)) = 1.0;
          eq_rows.push_back(std::move(r));
          eq_rhs.push_back(col_degree);
        }
      }
    };
    add_group_equalities(pin_s, L.js, cfg.row_degree_strong, cfg.col_degree_strong,
                         [&L](int i, int k) { return L.s(i, k); });
    add_group_equalities(pin_w, L.jw, cfg.row_degree_weak, cfg.col_degree_weak,
                         [&L](int j, int k) { return L.w(j, k); });
    prob.eq_A.resize(int(eq_rows.size()), L.n);
    prob.eq_b.resize(int(eq_rows.size()));
    for (size_t r = 0; r < eq_rows.size(); ++r) {
      prob.eq_A.row(int(r)) = eq_rows[r].transpose();
      prob.eq_b(int(r)) = eq_rhs[r];
    }

    // linearized rate constraint
    {
      SmoothConstraint dc;
      dc.alpha = Eigen::VectorXd::Zero(L.n);
      dc.alpha(L.t2()) = 1.0;
      double v_at = v2_norm(fw);
      double inner = 0.0;
      for (int k = 0; k < L.K; ++k) {
        double den = 1.0 + (gw.col(k).array() * fw.col(k).array()).sum();
        for (int j = 0; j < L.jw; ++j) {
          double dvdk = gw(j, k) / (kLn2 * den);
          dc.alpha(L.w(j, k)) = dvdk;
          inner += dvdk * fw(j, k);
        }
      }
      dc.beta = v_at - inner;
      for (int k = 0; k < L.K; ++k) {
        LogSumTerm lt;
        lt.a = Eigen::VectorXd::Zero(L.n);
        for (int i = 0; i < L.js; ++i) lt.a(L.s(i, k)) = gs(i, k);
        for (int j = 0; j < L.jw; ++j) lt.a(L.w(j, k)) = gw(j, k);
        lt.b = 1.0;
        dc.logs.push_back(std::move(lt));
      }
      dc.hard = true;
      prob.ineqs.push_back(std::move(dc));
    }

    // weak-group rate floor at the fixed powers (tiny slack keeps a strict
    // interior reachable; the final power step restores the exact floor)
    if (qos > 0.0 && p_w > 0.0) {
      SmoothConstraint q;
      q.alpha = Eigen::VectorXd::Zero(L.n);
      q.beta = qos - 1e-9 * std::max(1.0, qos);
      for (int k = 0; k < L.K; ++k) {
        LogSumTerm lt;
        lt.a = Eigen::VectorXd::Zero(L.n);
        for (int j = 0; j < L.jw; ++j) lt.a(L.w(j, k)) = gw(j, k);
        lt.b = 1.0;
        q.logs.push_back(std::move(lt));
      }
      prob.ineqs.push_back(std::move(q));
    }

    // degree floors plus power caps where the rows are not pinned
    auto add_group_inequalities = [&](const GroupPinning& pin, int users, int row_degree,
                                      int col_degree, double p, auto idx) {
      if (pin.saturated) return;  // all entries fixed by equalities
      if (!pin.rows_pinned) {
        for (int j = 0; j < users; ++j) {
          SmoothConstraint floor_c;
          floor_c.alpha = Eigen::VectorXd::Zero(L.n);
          for (int k = 0; k < L.K; ++k) floor_c.alpha(idx(j, k)) = -1.0;
          floor_c.beta = row_degree;
          floor_c.hard = true;
          prob.ineqs.push_back(std::move(floor_c));
          if (p > 0.0) {
            SmoothConstraint cap_c;
            cap_c.alpha = Eigen::VectorXd::Zero(L.n);
            for (int k = 0; k < L.K; ++k) cap_c.alpha(idx(j, k)) = p;
            cap_c.beta = -P;
            cap_c.hard = true;
            prob.ineqs.push_back(std::move(cap_c));
          }
        }
      }
      if (!pin.cols_pinned) {
        for (int k = 0; k < L.K; ++k) {
          SmoothConstraint col_c;
          col_c.alpha = Eigen::VectorXd::Zero(L.n);
          for (int j = 0; j < users; ++j) col_c.alpha(idx(j, k)) = -1.0;
          col_c.beta = col_degree;
          col_c.hard = true;
          prob.ineqs.push_back(std::move(col_c));
        }
      }
    };
    add_group_inequalities(pin_s, L.js, cfg.row_degree_strong, cfg.col_degree_strong, p_s,
                           [&L](int i, int k) { return L.s(i, k); });
    add_group_inequalities(pin_w, L.jw, cfg.row_degree_weak, cfg.col_degree_weak, p_w,
                           [&L](int j, int k) { return L.w(j, k); });

    // box constraints; upper bounds are dropped for saturated entries, which
    // the equalities hold at one
    auto entry_saturated = [&](int v) {
      if (v >= L.n - 1) return false;
      return v < L.js * L.K ? pin_s.saturated : pin_w.saturated;
    };
    for (int v = 0; v + 1 < L.n; ++v) {
      prob.ineqs.push_back(box_lower(L.n, v));
      if (!entry_saturated(v)) prob.ineqs.push_back(box_upper(L.n, v, 1.0));
    }

    // start: blend the linearization point toward the interior target and
    // project pinned groups back onto their degree equalities
    const double gamma = 0.5;
    auto start_group = [&](const Eigen::MatrixXd& f, const GroupPinning& pin, double rho,
                           int users, int row_degree, int col_degree) {
      if (pin.saturated) return Eigen::MatrixXd::Ones(users, L.K).eval();
      Eigen::MatrixXd out =
          (1.0 - gamma) * f + gamma * Eigen::MatrixXd::Constant(users, L.K, rho);
      if (pin.rows_pinned)
        project_to_degrees(out, row_degree, col_degree, pin.cols_pinned);
      return out;
    };
    Eigen::MatrixXd fs_start = start_group(fs, pin_s, rho_s, L.js,
                                           cfg.row_degree_strong, cfg.col_degree_strong);
    Eigen::MatrixXd fw_start = start_group(fw, pin_w, rho_w, L.jw, cfg.row_degree_weak,
                                           cfg.col_degree_weak);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(L.n);
    for (int i = 0; i < L.js; ++i)
      for (int k = 0; k < L.K; ++k) x0(L.s(i, k)) = fs_start(i, k);
    for (int j = 0; j < L.jw; ++j)
      for (int k = 0; k < L.K; ++k) x0(L.w(j, k)) = fw_start(j, k);
    {
      // strict slack in the linearized rate constraint
      double v_lin = prob.ineqs[0].alpha.head(L.n - 1).dot(x0.head(L.n - 1)) +
                     prob.ineqs[0].beta;
      x0(L.t2()) = u2_norm(fs_start, fw_start) - v_lin - 1.0;
    }

    Solution sol = solve_convex_subproblem(prob, x0, cfg.solver);
    if (sol.status == SolveStatus::infeasible)
      throw InfeasibleError("assignment step infeasible: " + sol.message);
    if (sol.status != SolveStatus::optimal && sol.status != SolveStatus::max_iterations)
      throw std::runtime_error(std::string("assignment step solver failure: ") +
                               to_string(sol.status) + " " + sol.message);

    for (int i = 0; i < L.js; ++i)
      for (int k = 0; k < L.K; ++k) fs(i, k) = std::clamp(sol.x(L.s(i, k)), 0.0, 1.0);
    for (int j = 0; j < L.jw; ++j)
      for (int k = 0; k < L.K; ++k) fw(j, k) = std::clamp(sol.x(L.w(j, k)), 0.0, 1.0);
    res.t2 = sol.x(L.t2());
    res.objective = sol.objective;
    res.objective_trace.push_back(sol.objective);
    res.iterations = n2 + 1;
    double resid =
        std::abs(sol.objective - obj_prev) / std::max(1.0, std::abs(sol.objective));
    obj_prev = sol.objective;
    if (n2 > 0 && resid < cfg.inner_tol) break;
  }

  res.F_strong.entries = fs;
  res.F_weak.entries = fw;
  return res;
}

FactorGraph round_and_repair(const RelaxedFactorGraph& F, int row_degree,
                             int col_degree) {
  const int J = F.users();
  const int K = F.subcarriers();
  if (long(J) * row_degree != long(K) * col_degree) {
    std::ostringstream os;
    os << "round_and_repair: cannot satisfy rows=" << row_degree
       << " and columns=" << col_degree << " with " << J << "x" << K << " entries";
    throw std::invalid_argument(os.str());
  }
  if (row_degree < 1 || row_degree > K || col_degree < 1 || col_degree > J)
    throw std::invalid_argument("round_and_repair: degree out of range");

  FactorGraph g;
  g.users = J;
  g.subcarriers = K;
  g.row_degree = row_degree;
  g.col_degree = col_degree;
  g.entries.assign(size_t(J) * K, 0);

  // per user, keep the row_degree largest relaxed entries
  for (int j = 0; j < J; ++j) {
    std::vector<int> order(K);
    for (int k = 0; k < K; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (F.entries(j, a) != F.entries(j, b)) return F.entries(j, a) > F.entries(j, b);
      return a < b;
    });
    for (int r = 0; r < row_degree; ++r) g.set(j, order[r], 1);
  }

  std::vector<int> col(K, 0);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < J; ++j) col[k] += g.at(j, k);

  // move assignments from overfull to underfull columns, losing as little
  // relaxed mass as possible
  for (;;) {
    int excess = 0;
    for (int k = 0; k < K; ++k) excess += std::max(0, col[k] - col_degree);
    if (excess == 0) break;

    int best_j = -1, best_from = -1, best_to = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < J; ++j)
      for (int from = 0; from < K; ++from) {
        if (col[from] <= col_degree || !g.at(j, from)) continue;
        for (int to = 0; to < K; ++to) {
          if (col[to] >= col_degree || g.at(j, to)) continue;
          double score = F.entries(j, to) - F.entries(j, from);
          if (score > best_score) {
            best_score = score;
            best_j = j;
            best_from = from;
            best_to = to;
          }
        }
      }
    if (best_j < 0)
      throw std::invalid_argument("round_and_repair: no repairing swap exists");
    g.set(best_j, best_from, 0);
    g.set(best_j, best_to, 1);
    --col[best_from];
    ++col[best_to];
  }
  return g;
}

double default_qos_threshold(const GainTable& g, const OptimizerConfig& cfg) {
  FactorGraph canon = canonical_factor_graph(int(g.weak.rows()), g.subcarriers(),
                                             cfg.row_degree_weak);
  Allocation a;
  a.p_weak = cfg.max_power_w / cfg.row_degree_weak;
  a.F_weak = relax(canon);
  return 0.5 * sum_rate_weak(a, g);
}

OptimizeResult alternating_optimize(const GainTable& g, const OptimizerConfig& cfg_in) {
  OptimizerConfig cfg = cfg_in;
  const int J_s = int(g.strong.rows());
  const int J_w = int(g.weak.rows());
  const int K = g.subcarriers();

  RelaxedFactorGraph F_s = relax(canonical_factor_graph(J_s, K, cfg.row_degree_strong));
  RelaxedFactorGraph F_w = relax(canonical_factor_graph(J_w, K, cfg.row_degree_weak));
  double p_s = 0.5 * cfg.max_power_w / cfg.row_degree_strong;
  double p_w = 0.5 * cfg.max_power_w / cfg.row_degree_weak;

  if (cfg.qos_threshold < 0.0) cfg.qos_threshold = default_qos_threshold(g, cfg);

  auto strong_rate = [&](double ps, double pw, const RelaxedFactorGraph& fs,
                         const RelaxedFactorGraph& fw) {
    Allocation a;
    a.p_strong = ps;
    a.p_weak = pw;
    a.F_strong = fs;
    a.F_weak = fw;
    return sum_rate_strong(a, g);
  };

  if (cfg.penalty_weight < 0.0)
    cfg.penalty_weight =
        0.1 * std::abs(strong_rate(p_s, p_w, F_s, F_w)) / double((J_s + J_w) * K);

  OptimizeResult out;
  out.qos_threshold = cfg.qos_threshold;
  out.penalty_weight = cfg.penalty_weight;
  OptimizerTrace& tr = out.trace;

  double obj = strong_rate(p_s, p_w, F_s, F_w);
  tr.rows.push_back({0, 'i', obj});
  double obj_prev = obj;

  for (int outer = 1; outer <= cfg.max_outer_iters; ++outer) {
    // power step (keep the incumbent if numerics would regress it)
    PowerStepResult ps_res = solve_p_subproblem(F_s, F_w, p_s, p_w, g, cfg);
    for (size_t i = 1; i < ps_res.t1_trace.size(); ++i)
      tr.p_residuals.push_back(std::abs(ps_res.t1_trace[i] - ps_res.t1_trace[i - 1]));
    double sr_new = strong_rate(ps_res.p_strong, ps_res.p_weak, F_s, F_w);
    double sr_old = strong_rate(p_s, p_w, F_s, F_w);
    if (sr_new >= sr_old - 1e-12 * std::max(1.0, std::abs(sr_old))) {
      p_s = ps_res.p_strong;
      p_w = ps_res.p_weak;
    }
    tr.rows.push_back({outer, 'p', strong_rate(p_s, p_w, F_s, F_w)});

    // assignment step: weights restart at one, then reweight each round
    WeightPair w{ones_weights(J_s, K), ones_weights(J_w, K)};
    RelaxedFactorGraph fs_cand = F_s;
    RelaxedFactorGraph fw_cand = F_w;
    for (int round = 0; round < cfg.max_reweight_rounds; ++round) {
      GraphStepResult f_res =
          solve_F_subproblem(p_s, p_w, fs_cand, fw_cand, w, g, cfg);
      for (size_t i = 1; i < f_res.objective_trace.size(); ++i)
        tr.f_residuals.push_back(
            std::abs(f_res.objective_trace[i] - f_res.objective_trace[i - 1]));
      double delta = std::max(
          (f_res.F_strong.entries - fs_cand.entries).cwiseAbs().maxCoeff(),
          (f_res.F_weak.entries - fw_cand.entries).cwiseAbs().maxCoeff());
      fs_cand = f_res.F_strong;
      fw_cand = f_res.F_weak;
      w = update_weights(fs_cand, fw_cand, cfg.epsilon);
      // at least one solve under the updated weights before settling
      if (round > 0 && delta < cfg.inner_tol) break;
    }
    double sr_cand = strong_rate(p_s, p_w, fs_cand, fw_cand);
    double sr_cur = strong_rate(p_s, p_w, F_s, F_w);
    if (sr_cand >= sr_cur - 1e-12 * std::max(1.0, std::abs(sr_cur))) {
      F_s = fs_cand;
      F_w = fw_cand;
    }
    obj = strong_rate(p_s, p_w, F_s, F_w);
    tr.rows.push_back({outer, 'F', obj});
    tr.outer_iterations = outer;

    if (std::abs(obj - obj_prev) <= cfg.outer_tol * std::max(1.0, std::abs(obj))) {
      tr.converged = true;
      break;
    }
    obj_prev = obj;
  }

  out.relaxed_strong = F_s;
  out.relaxed_weak = F_w;
  out.graph_strong = round_and_repair(F_s, cfg.row_degree_strong, cfg.col_degree_strong);
  out.graph_weak = round_and_repair(F_w, cfg.row_degree_weak, cfg.col_degree_weak);

  RelaxedFactorGraph bs = relax(out.graph_strong);
  RelaxedFactorGraph bw = relax(out.graph_weak);
  PowerStepResult final_p = solve_p_subproblem(bs, bw, p_s, p_w, g, cfg);
  out.p_strong = final_p.p_strong;
  out.p_weak = final_p.p_weak;

  Allocation a;
  a.p_strong = out.p_strong;
  a.p_weak = out.p_weak;
  a.F_strong = bs;
  a.F_weak = bw;
  out.strong_rate = sum_rate_strong(a, g);
  out.weak_rate = sum_rate_weak(a, g);
  return out;
}

}  // namespace hdnoma
