#include "rate_model.hpp"

#include <cmath>

namespace hdnoma {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// sum_j g(j,k) * f(j,k) for one subcarrier
double column_load(const Eigen::MatrixXd& gains, const Eigen::MatrixXd& f, int k) {
  return (gains.col(k).array() * f.col(k).array()).sum();
}

}  // namespace

GainTable GainTable::from_channel(const ChannelState& st) {
  GainTable g;
  const int K = st.subcarriers();
  g.strong.resize(int(st.strong.size()), K);
  g.weak.resize(int(st.weak.size()), K);
  for (size_t j = 0; j < st.strong.size(); ++j)
    for (int k = 0; k < K; ++k) g.strong(int(j), k) = std::norm(st.strong[j][k]);
  for (size_t j = 0; j < st.weak.size(); ++j)
    for (int k = 0; k < K; ++k) g.weak(int(j), k) = std::norm(st.weak[j][k]);
  g.noise_var = st.noise_variance_w;
  return g;
}

double sum_rate_scma(double power_w, const RelaxedFactorGraph& F,
                     const Eigen::MatrixXd& gains, double noise_var_w) {
  double sr = 0.0;
  for (int k = 0; k < gains.cols(); ++k)
    sr += std::log2(1.0 + power_w * column_load(gains, F.entries, k) / noise_var_w);
  return sr;
}

double sum_rate_strong(const Allocation& a, const GainTable& g) {
  double sr = 0.0;
  for (int k = 0; k < g.subcarriers(); ++k) {
    double num = a.p_strong * column_load(g.strong, a.F_strong.entries, k);
    double den = a.p_weak * column_load(g.weak, a.F_weak.entries, k) + g.noise_var;
    sr += std::log2(1.0 + num / den);
  }
  return sr;
}

double sum_rate_weak(const Allocation& a, const GainTable& g) {
  return sum_rate_scma(a.p_weak, a.F_weak, g.weak, g.noise_var);
}

PowerDcParts dc_parts_p(double p_strong, double p_weak, const RelaxedFactorGraph& F_s,
                        const RelaxedFactorGraph& F_w, const GainTable& g) {
  PowerDcParts parts;
  for (int k = 0; k < g.subcarriers(); ++k) {
    double s = column_load(g.strong, F_s.entries, k);
    double w = column_load(g.weak, F_w.entries, k);
    double den = w * p_weak + g.noise_var;
    parts.u += std::log2(s * p_strong + den);
    parts.v += std::log2(den);
    parts.grad_v(1) += w / (kLn2 * den);
  }
  return parts;
}

GraphDcParts dc_parts_F(const RelaxedFactorGraph& F_s, const RelaxedFactorGraph& F_w,
                        double p_strong, double p_weak, const GainTable& g) {
  GraphDcParts parts;
  parts.grad_v_strong = Eigen::MatrixXd::Zero(F_s.users(), F_s.subcarriers());
  parts.grad_v_weak = Eigen::MatrixXd::Zero(F_w.users(), F_w.subcarriers());
  for (int k = 0; k < g.subcarriers(); ++k) {
    double s = column_load(g.strong, F_s.entries, k);
    double w = column_load(g.weak, F_w.entries, k);
    double den = w * p_weak + g.noise_var;
    parts.u += std::log2(s * p_strong + den);
    parts.v += std::log2(den);
    for (int j = 0; j < F_w.users(); ++j)
      parts.grad_v_weak(j, k) = p_weak * g.weak(j, k) / (kLn2 * den);
  }
  return parts;
}

}  // namespace hdnoma
