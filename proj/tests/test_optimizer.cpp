#include <doctest.h>

#include "channel.hpp"
#include "optimizer.hpp"

using namespace hdnoma;

namespace {

GainTable paper_gains(uint64_t seed) {
  LinkBudget b;
  Rng rng(seed);
  ChannelState st = draw_channel(rng, b, 6, 6, 4);
  return GainTable::from_channel(st);
}

OptimizerConfig paper_cfg(double power_dbm = 40.0) {
  OptimizerConfig cfg;
  cfg.max_power_w = dbm_to_watts(power_dbm);
  return cfg;
}

RelaxedFactorGraph canon64() { return relax(canonical_factor_graph(6, 4, 2)); }

double strong_rate_of(double ps, double pw, const RelaxedFactorGraph& fs,
                      const RelaxedFactorGraph& fw, const GainTable& g) {
  Allocation a{ps, pw, fs, fw};
  return sum_rate_strong(a, g);
}

double weak_rate_of(double pw, const RelaxedFactorGraph& fw, const GainTable& g) {
  Allocation a{0.0, pw, fw, fw};
  return sum_rate_weak(a, g);
}

}  // namespace

TEST_CASE("power step with no rate floor matches a dense grid search") {
  GainTable g = paper_gains(5);
  OptimizerConfig cfg = paper_cfg();
  cfg.qos_threshold = 0.0;
  RelaxedFactorGraph F = canon64();
  PowerStepResult res = solve_p_subproblem(F, F, 1.0, 1.0, g, cfg);

  const double cap = cfg.max_power_w / 2.0;
  double best = -1.0, best_pw = 0.0;
  const int n = 200;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double ps = cap * i / (n - 1), pw = cap * j / (n - 1);
      double sr = strong_rate_of(ps, pw, F, F, g);
      if (sr > best) {
        best = sr;
        best_pw = pw;
      }
    }
  CHECK(strong_rate_of(res.p_strong, res.p_weak, F, F, g) >= best - 1e-6);
  CHECK(res.p_weak <= best_pw + cap / (n - 1));
}

TEST_CASE("power step with a binding rate floor pushes the weak power to its cap") {
  GainTable g = paper_gains(7);
  OptimizerConfig cfg = paper_cfg();
  RelaxedFactorGraph F = canon64();
  const double cap_w = cfg.max_power_w / 2.0;
  cfg.qos_threshold = weak_rate_of(cap_w, F, g) - 1e-9;
  PowerStepResult res = solve_p_subproblem(F, F, 1.0, 1.0, g, cfg);
  CHECK(res.p_weak == doctest::Approx(cap_w).epsilon(1e-6));
  CHECK(weak_rate_of(res.p_weak, F, g) >= cfg.qos_threshold - 1e-8);
}

TEST_CASE("power step reports an unattainable rate floor") {
  GainTable g = paper_gains(9);
  OptimizerConfig cfg = paper_cfg();
  RelaxedFactorGraph F = canon64();
  cfg.qos_threshold = weak_rate_of(cfg.max_power_w / 2.0, F, g) + 1.0;
  CHECK_THROWS_AS(solve_p_subproblem(F, F, 1.0, 1.0, g, cfg), InfeasibleError);
}

TEST_CASE("power step objective never decreases across its iterations") {
  for (uint64_t seed : {11ull, 13ull, 17ull}) {
    GainTable g = paper_gains(seed);
    OptimizerConfig cfg = paper_cfg(35.0);
    RelaxedFactorGraph F = canon64();
    cfg.qos_threshold = 0.4 * weak_rate_of(cfg.max_power_w / 2.0, F, g);
    PowerStepResult res =
        solve_p_subproblem(F, F, 0.1 * cfg.max_power_w, 0.1 * cfg.max_power_w, g, cfg);
    for (size_t i = 1; i < res.t1_trace.size(); ++i)
      CHECK(res.t1_trace[i] >= res.t1_trace[i - 1] - 1e-8);
    // the achieved powers satisfy the original constraints
    CHECK(weak_rate_of(res.p_weak, F, g) >= cfg.qos_threshold - 1e-8);
    CHECK(2.0 * res.p_strong <= cfg.max_power_w + 1e-9);
    CHECK(2.0 * res.p_weak <= cfg.max_power_w + 1e-9);
  }
}

TEST_CASE("one more linearization pass from the optimum stays put") {
  GainTable g = paper_gains(19);
  OptimizerConfig cfg = paper_cfg();
  RelaxedFactorGraph F = canon64();
  cfg.qos_threshold = 0.5 * weak_rate_of(cfg.max_power_w / 2.0, F, g);
  PowerStepResult full = solve_p_subproblem(F, F, 1.0, 1.0, g, cfg);
  OptimizerConfig one = cfg;
  one.max_inner_iters = 1;
  PowerStepResult again =
      solve_p_subproblem(F, F, full.p_strong, full.p_weak, g, one);
  CHECK(again.p_strong == doctest::Approx(full.p_strong).epsilon(1e-6));
  CHECK(again.p_weak == doctest::Approx(full.p_weak).epsilon(1e-6));
}

TEST_CASE("weights are elementwise reciprocals") {
  RelaxedFactorGraph F;
  F.entries = Eigen::MatrixXd::Zero(2, 2);
  F.entries << 1.0, 0.0, 0.25, 0.5;
  WeightPair w = update_weights(F, F, 1e-3);
  CHECK(w.strong(0, 0) == doctest::Approx(1.0 / 1.001));
  CHECK(w.strong(0, 1) == doctest::Approx(1000.0));
  CHECK(w.strong(1, 0) == doctest::Approx(1.0 / 0.251));
  // reciprocal is monotone: smaller entries get larger weights
  CHECK(w.strong(0, 1) > w.strong(1, 0));
  CHECK(w.strong(1, 0) > w.strong(0, 0));
  CHECK_THROWS_AS(update_weights(F, F, 0.0), std::invalid_argument);
}

TEST_CASE("assignment step with no penalty and full degrees saturates the box") {
  GainTable g = paper_gains(23);
  OptimizerConfig cfg = paper_cfg();
  cfg.penalty_weight = 0.0;
  cfg.row_degree_strong = cfg.row_degree_weak = 4;  // rows must fill completely
  cfg.col_degree_strong = cfg.col_degree_weak = 6;
  cfg.qos_threshold = 0.0;
  const double p = 0.1 * cfg.max_power_w / 4.0;  // power caps stay slack
  RelaxedFactorGraph full;
  full.entries = Eigen::MatrixXd::Ones(6, 4);
  WeightPair w{ones_weights(6, 4), ones_weights(6, 4)};
  GraphStepResult res = solve_F_subproblem(p, p, full, full, w, g, cfg);
  CHECK(res.F_strong.entries.minCoeff() >= 1.0 - 1e-6);
  CHECK(res.F_weak.entries.minCoeff() >= 1.0 - 1e-6);
}

TEST_CASE("huge penalty with weights taken at a binary point keeps it fixed") {
  GainTable g = paper_gains(29);
  OptimizerConfig cfg = paper_cfg();
  cfg.penalty_weight = 1e6;
  cfg.max_inner_iters = 1;  // a single pass
  cfg.qos_threshold = 0.3 * weak_rate_of(cfg.max_power_w / 2.0, canon64(), g);
  RelaxedFactorGraph F0 = canon64();
  WeightPair w = update_weights(F0, F0, cfg.epsilon);
  const double p = cfg.max_power_w / 2.0;
  GraphStepResult res = solve_F_subproblem(p, p, F0, F0, w, g, cfg);
  CHECK((res.F_strong.entries - F0.entries).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK((res.F_weak.entries - F0.entries).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("assignment step surrogate objective never decreases across passes") {
  GainTable g = paper_gains(31);
  OptimizerConfig cfg = paper_cfg();
  cfg.penalty_weight = 0.05;
  cfg.qos_threshold = 0.5 * weak_rate_of(cfg.max_power_w / 2.0, canon64(), g);
  RelaxedFactorGraph F0 = canon64();
  WeightPair w{ones_weights(6, 4), ones_weights(6, 4)};
  const double p_s = cfg.max_power_w / 2.0;
  const double p_w = 0.2 * cfg.max_power_w / 2.0;
  GraphStepResult res = solve_F_subproblem(p_s, p_w, F0, F0, w, g, cfg);
  REQUIRE(res.objective_trace.size() >= 2);
  for (size_t i = 1; i < res.objective_trace.size(); ++i)
    CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-8);
}

TEST_CASE("rounding: identity, denoising, and always-valid output") {
  FactorGraph canon = canonical_factor_graph(6, 4, 2);

  SUBCASE("already binary is untouched") {
    FactorGraph out = round_and_repair(relax(canon), 2, 3);
    CHECK(out.entries == canon.entries);
  }
  SUBCASE("uniform noise on the zeros is stripped") {
    Rng rng(37);
    RelaxedFactorGraph noisy = relax(canon);
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 4; ++k)
        if (noisy.entries(j, k) == 0.0) noisy.entries(j, k) = 0.4 * rng.uniform();
    FactorGraph out = round_and_repair(noisy, 2, 3);
    CHECK(out.entries == canon.entries);
  }
  SUBCASE("flat matrix still yields a valid graph") {
    RelaxedFactorGraph flat;
    flat.entries = Eigen::MatrixXd::Constant(6, 4, 0.5);
    FactorGraph out = round_and_repair(flat, 2, 3);
    CHECK(validate_factor_graph(out).ok);
  }
  SUBCASE("random relaxed inputs always repair to valid graphs") {
    Rng rng(41);
    for (int t = 0; t < 1000; ++t) {
      RelaxedFactorGraph r;
      r.entries = Eigen::MatrixXd::Zero(6, 4);
      for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 4; ++k) r.entries(j, k) = rng.uniform();
      FactorGraph out = round_and_repair(r, 2, 3);
      CHECK(validate_factor_graph(out).ok);
    }
  }
  SUBCASE("impossible degree demands are rejected") {
    RelaxedFactorGraph r;
    r.entries = Eigen::MatrixXd::Constant(6, 4, 0.5);
    CHECK_THROWS_AS(round_and_repair(r, 3, 3), std::invalid_argument);
  }
}

TEST_CASE("alternating optimization on paper-scale draws") {
  for (uint64_t seed : {101ull, 102ull, 103ull}) {
    GainTable g = paper_gains(seed);
    OptimizerConfig cfg = paper_cfg(35.0);
    OptimizeResult res = alternating_optimize(g, cfg);

    CHECK(res.trace.converged);
    CHECK(res.trace.outer_iterations <= 10);
    for (size_t i = 1; i < res.trace.rows.size(); ++i)
      CHECK(res.trace.rows[i].objective >= res.trace.rows[i - 1].objective - 1e-8);

    CHECK(validate_factor_graph(res.graph_strong).ok);
    CHECK(validate_factor_graph(res.graph_weak).ok);
    CHECK(res.weak_rate >= res.qos_threshold - 1e-8);
    CHECK(2.0 * res.p_strong <= cfg.max_power_w * (1 + 1e-9));
    CHECK(2.0 * res.p_weak <= cfg.max_power_w * (1 + 1e-9));
    // the returned strong rate matches the allocation it reports
    Allocation a{res.p_strong, res.p_weak, relax(res.graph_strong),
                 relax(res.graph_weak)};
    CHECK(res.strong_rate == doctest::Approx(sum_rate_strong(a, g)).epsilon(1e-12));
  }
}

TEST_CASE("alternating optimization is bit-for-bit deterministic") {
  GainTable g = paper_gains(131);
  OptimizerConfig cfg = paper_cfg();
  OptimizeResult a = alternating_optimize(g, cfg);
  OptimizeResult b = alternating_optimize(g, cfg);
  CHECK(a.p_strong == b.p_strong);
  CHECK(a.p_weak == b.p_weak);
  CHECK(a.graph_strong.entries == b.graph_strong.entries);
  CHECK(a.graph_weak.entries == b.graph_weak.entries);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (size_t i = 0; i < a.trace.rows.size(); ++i)
    CHECK(a.trace.rows[i].objective == b.trace.rows[i].objective);
}

TEST_CASE("reweighting drives the relaxed entries toward the corners") {
  int fractional = 0, total = 0;
  for (uint64_t seed = 200; seed < 300; ++seed) {
    GainTable g = paper_gains(seed);
    OptimizerConfig cfg = paper_cfg(36.0);
    OptimizeResult res = alternating_optimize(g, cfg);
    for (const Eigen::MatrixXd& m : {res.relaxed_strong.entries, res.relaxed_weak.entries})
      for (int j = 0; j < m.rows(); ++j)
        for (int k = 0; k < m.cols(); ++k) {
          ++total;
          fractional += m(j, k) > 0.01 && m(j, k) < 0.99;
        }
  }
  CHECK(double(fractional) <= 0.05 * double(total));
}

TEST_CASE("degenerate single-user instance matches the hand solution") {
  GainTable g;
  g.strong = Eigen::MatrixXd::Constant(1, 1, 4.0e-13);
  g.weak = Eigen::MatrixXd::Constant(1, 1, 8.0e-15);
  g.noise_var = 1e-15;
  OptimizerConfig cfg;
  cfg.max_power_w = 2.0;
  cfg.row_degree_strong = cfg.col_degree_strong = 1;
  cfg.row_degree_weak = cfg.col_degree_weak = 1;
  cfg.qos_threshold = 3.0;  // binding: p_w = (2^3 - 1) sigma^2 / g_w
  OptimizeResult res = alternating_optimize(g, cfg);
  const double pw_expect = 7.0 * g.noise_var / g.weak(0, 0);
  const double ps_expect = cfg.max_power_w;
  CHECK(res.p_strong == doctest::Approx(ps_expect).epsilon(1e-6));
  CHECK(res.p_weak == doctest::Approx(pw_expect).epsilon(1e-6));
  double sr_expect =
      std::log2(1.0 + g.strong(0, 0) * ps_expect / (g.weak(0, 0) * pw_expect + g.noise_var));
  CHECK(res.strong_rate == doctest::Approx(sr_expect).epsilon(1e-6));
}
