#pragma once

#include <Eigen/Core>

#include "channel.hpp"
#include "factor_graph.hpp"

namespace hdnoma {

// Squared channel magnitudes |h|^2 per group, users x subcarriers.
struct GainTable {
  Eigen::MatrixXd strong;
  Eigen::MatrixXd weak;
  double noise_var = 0.0;

  int subcarriers() const { return int(strong.cols() ? strong.cols() : weak.cols()); }
  static GainTable from_channel(const ChannelState& st);
};

// Group powers plus the assignment pair (binary graphs are carried in their
// relaxed form; entries then sit exactly on {0,1}).
struct Allocation {
  double p_strong = 0.0;
  double p_weak = 0.0;
  RelaxedFactorGraph F_strong;
  RelaxedFactorGraph F_weak;
};

// Single-group sum rate: sum_k log2(1 + p * sum_j g(j,k) f(j,k) / sigma^2).
double sum_rate_scma(double power_w, const RelaxedFactorGraph& F,
                     const Eigen::MatrixXd& gains, double noise_var_w);

// Strong-group rate with the weak group folded into the denominator as
// interference.
double sum_rate_strong(const Allocation& a, const GainTable& g);

// Weak-group rate after the strong group has been removed: interference-free.
double sum_rate_weak(const Allocation& a, const GainTable& g);

// Difference-of-concave split of the strong-group rate in the powers:
// u(p) - v(p) == sum_rate_strong(p) with both u and v concave, and
// grad_v = [d v/d p_strong, d v/d p_weak]. v has no p_strong term, so
// grad_v[0] == 0 identically.
struct PowerDcParts {
  double u = 0.0;
  double v = 0.0;
  Eigen::Vector2d grad_v = Eigen::Vector2d::Zero();
};
PowerDcParts dc_parts_p(double p_strong, double p_weak, const RelaxedFactorGraph& F_s,
                        const RelaxedFactorGraph& F_w, const GainTable& g);

// Same split in the assignment entries at fixed powers. The strong block of
// grad_v is identically zero.
struct GraphDcParts {
  double u = 0.0;
  double v = 0.0;
  Eigen::MatrixXd grad_v_strong;
  Eigen::MatrixXd grad_v_weak;
};
GraphDcParts dc_parts_F(const RelaxedFactorGraph& F_s, const RelaxedFactorGraph& F_w,
                        double p_strong, double p_weak, const GainTable& g);

}  // namespace hdnoma
