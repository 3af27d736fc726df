#pragma once

#include "convex_solver.hpp"
#include "rate_model.hpp"

namespace hdnoma {

struct OptimizerConfig {
  double epsilon = 1e-3;       // reweighting offset
  double penalty_weight = -1;  // < 0: resolved to 0.1*|objective at start|/(J*K)
  double qos_threshold = -1;   // < 0: resolved to half the weak rate at full power
  double max_power_w = 1.0;    // per-user budget P
  double inner_tol = 1e-4;     // relative objective change, SCA loops
  double outer_tol = 1e-4;     // relative objective change, outer loop
  int max_inner_iters = 30;
  int max_reweight_rounds = 12;
  int max_outer_iters = 20;
  int row_degree_strong = 2;
  int col_degree_strong = 3;
  int row_degree_weak = 2;
  int col_degree_weak = 3;
  SolverOptions solver;
};

// Power step at fixed assignments: maximize a slack under the linearized
// difference-of-concave rate constraint, the weak-group rate floor, and the
// per-user power caps; iterate the linearization to a fixed point. The
// returned powers satisfy the original (unlinearized) constraints.
struct PowerStepResult {
  double p_strong = 0.0;
  double p_weak = 0.0;
  double t1 = 0.0;                 // achieved strong-rate lower bound
  std::vector<double> t1_trace;    // one entry per SCA iteration
  int iterations = 0;
};
PowerStepResult solve_p_subproblem(const RelaxedFactorGraph& F_s,
                                   const RelaxedFactorGraph& F_w, double p_s0,
                                   double p_w0, const GainTable& g,
                                   const OptimizerConfig& cfg);

struct WeightPair {
  Eigen::MatrixXd strong;
  Eigen::MatrixXd weak;
};

// Assignment step at fixed powers and fixed penalty weights: maximize
// t2 - lambda * sum(w .* f) subject to the linearized rate constraint, the
// weak-group rate floor, reversed degree floors (rows >= d_f, columns >= d_v,
// so the penalty cannot starve the graphs), the box [0,1], and the power
// caps; SCA loop on the linearization.
struct GraphStepResult {
  RelaxedFactorGraph F_strong;
  RelaxedFactorGraph F_weak;
  double t2 = 0.0;
  double objective = 0.0;               // penalized surrogate value
  std::vector<double> objective_trace;  // one entry per SCA iteration
  int iterations = 0;
};
GraphStepResult solve_F_subproblem(double p_s, double p_w,
                                   const RelaxedFactorGraph& F_s0,
                                   const RelaxedFactorGraph& F_w0,
                                   const WeightPair& weights, const GainTable& g,
                                   const OptimizerConfig& cfg);

// Elementwise 1 / (|f| + epsilon).
WeightPair update_weights(const RelaxedFactorGraph& F_s, const RelaxedFactorGraph& F_w,
                          double epsilon);
Eigen::MatrixXd ones_weights(int users, int subcarriers);

// Binarize a relaxed assignment: keep each user's row_degree largest entries,
// then swap assignments (preferring swaps that lose the least relaxed mass)
// until every column carries exactly col_degree users. Ties break toward the
// lowest (user, subcarrier) index.
FactorGraph round_and_repair(const RelaxedFactorGraph& F, int row_degree,
                             int col_degree);

struct TraceRow {
  int outer = 0;
  char stage = 'i';  // 'i' start, 'p' power step, 'F' assignment step
  double objective = 0.0;
};

struct OptimizerTrace {
  std::vector<TraceRow> rows;
  std::vector<double> p_residuals;  // per inner iteration, all outer rounds
  std::vector<double> f_residuals;
  int outer_iterations = 0;
  bool converged = false;
};

struct OptimizeResult {
  double p_strong = 0.0;
  double p_weak = 0.0;
  FactorGraph graph_strong;
  FactorGraph graph_weak;
  RelaxedFactorGraph relaxed_strong;  // pre-rounding iterates
  RelaxedFactorGraph relaxed_weak;
  double strong_rate = 0.0;  // at the returned binary allocation
  double weak_rate = 0.0;
  double qos_threshold = 0.0;   // resolved value
  double penalty_weight = 0.0;  // resolved value
  OptimizerTrace trace;
};

// Weak-group rate floor used when the config leaves it unset: half the weak
// rate at full per-user power on the canonical weak graph.
double default_qos_threshold(const GainTable& g, const OptimizerConfig& cfg);

// Alternating optimization: power step, then assignment step with weights
// reset to one and reweighted each round, until the outer objective settles.
// The final assignments are rounded once and the powers re-optimized at the
// binary graphs.
OptimizeResult alternating_optimize(const GainTable& g, const OptimizerConfig& cfg);

}  // namespace hdnoma
