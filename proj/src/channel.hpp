#pragma once

#include <span>

#include "common.hpp"

namespace hdnoma {

struct LinkBudget {
  double bandwidth_hz = 1e6;
  double strong_distance_km = 0.3;
  double weak_distance_km = 0.8;
  double max_power_w = 1.0;  // per-user transmit power budget P
};

// Per-link complex gains for one coherence block, split by group, plus the
// per-subcarrier thermal noise variance in watts.
struct ChannelState {
  std::vector<CVec> strong;  // J_s vectors of length K
  std::vector<CVec> weak;    // J_w vectors of length K
  double noise_variance_w = 0.0;

  int subcarriers() const {
    return strong.empty() ? (weak.empty() ? 0 : int(weak[0].size()))
                          : int(strong[0].size());
  }
};

// 145.4 + 37.5 log10(d), d in kilometers. Throws std::domain_error for d <= 0.
double path_loss_db(double d_km);

// Thermal floor of -204 dBW/Hz integrated over one subcarrier of width
// bw / subcarriers; returned in watts.
double noise_variance_w(double bw_hz, int subcarriers);

// Independent Rayleigh fading per user and subcarrier, scaled by the group
// path loss: h = sqrt(10^(-PL/10)) * g with g circularly symmetric unit
// variance. One call per coherence block.
ChannelState draw_channel(Rng& rng, const LinkBudget& budget, int j_strong,
                          int j_weak, int subcarriers);

// Received superposition: sum over strong users of sqrt(p_s) h .* x plus the
// same for weak users, plus (optionally) white complex Gaussian noise of
// componentwise variance noise_variance_w. Pass noise_rng = nullptr for a
// noise-free output.
CVec synthesize_received(std::span<const CVec> strong_codewords,
                         std::span<const CVec> weak_codewords,
                         const ChannelState& channels, double p_strong,
                         double p_weak, Rng* noise_rng);

}  // namespace hdnoma
