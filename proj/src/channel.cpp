#include "channel.hpp"

#include <cmath>
#include <stdexcept>

namespace hdnoma {

double path_loss_db(double d_km) {
  if (!(d_km > 0.0)) throw std::domain_error("path_loss_db: distance must be > 0");
  return 145.4 + 37.5 * std::log10(d_km);
}

double noise_variance_w(double bw_hz, int subcarriers) {
  if (!(bw_hz > 0.0)) throw std::domain_error("noise_variance_w: bandwidth must be > 0");
  if (subcarriers < 1) throw std::domain_error("noise_variance_w: need >= 1 subcarrier");
  double dbw = -204.0 + 10.0 * std::log10(bw_hz / double(subcarriers));
  return db_to_lin(dbw);
}

namespace {

void draw_group(Rng& rng, std::vector<CVec>& out, int users, int subcarriers,
                double amp) {
  out.assign(users, CVec(subcarriers));
  for (int j = 0; j < users; ++j)
    for (int k = 0; k < subcarriers; ++k) out[j][k] = amp * rng.cgaussian();
}

}  // namespace

ChannelState draw_channel(Rng& rng, const LinkBudget& budget, int j_strong,
                          int j_weak, int subcarriers) {
  ChannelState st;
  double amp_s = std::sqrt(db_to_lin(-path_loss_db(budget.strong_distance_km)));
  double amp_w = std::sqrt(db_to_lin(-path_loss_db(budget.weak_distance_km)));
  draw_group(rng, st.strong, j_strong, subcarriers, amp_s);
  draw_group(rng, st.weak, j_weak, subcarriers, amp_w);
  st.noise_variance_w = noise_variance_w(budget.bandwidth_hz, subcarriers);
  return st;
}

CVec synthesize_received(std::span<const CVec> strong_codewords,
                         std::span<const CVec> weak_codewords,
                         const ChannelState& channels, double p_strong,
                         double p_weak, Rng* noise_rng) {
  if (strong_codewords.size() != channels.strong.size() ||
      weak_codewords.size() != channels.weak.size())
    throw std::invalid_argument("synthesize_received: codeword count mismatch");
  const int K = channels.subcarriers();
  CVec y(K, cplx(0.0, 0.0));
  const double as = std::sqrt(p_strong);
  const double aw = std::sqrt(p_weak);
  for (size_t i = 0; i < strong_codewords.size(); ++i) {
    if (int(strong_codewords[i].size()) != K)
      throw std::invalid_argument("synthesize_received: codeword length mismatch");
    for (int k = 0; k < K; ++k)
      y[k] += as * channels.strong[i][k] * strong_codewords[i][k];
  }
  for (size_t j = 0; j < weak_codewords.size(); ++j) {
    if (int(weak_codewords[j].size()) != K)
      throw std::invalid_argument("synthesize_received: codeword length mismatch");
    for (int k = 0; k < K; ++k)
      y[k] += aw * channels.weak[j][k] * weak_codewords[j][k];
  }
  if (noise_rng) {
    const double sigma = std::sqrt(channels.noise_variance_w);
    for (int k = 0; k < K; ++k) y[k] += sigma * noise_rng->cgaussian();
  }
  return y;
}

}  // namespace hdnoma
