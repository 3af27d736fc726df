#pragma once

#include "mpa.hpp"

namespace hdnoma {

// Removes the reconstructed strong-group superposition from the observation:
// y - sum_i sqrt(p_strong) h_i .* x(decision_i).
CVec sic_subtract(const CVec& y, const std::vector<int>& strong_decisions,
                  const CodebookSet& strong_books,
                  const std::vector<CVec>& strong_channels, double p_strong);

struct HdDecodeResult {
  DecodeResult strong;
  DecodeResult weak;
};

// Two-stage receiver: the strong group is detected first with the weak group
// modeled as extra per-subcarrier Gaussian noise, its reconstruction is
// subtracted, then the weak group is detected against thermal noise alone.
// When genie_strong_words is given the subtraction uses those words instead
// of the stage-one decisions (isolates weak-stage behavior).
HdDecodeResult decode_hd(const CVec& y, const ChannelState& channels,
                         const CodebookSet& strong_books,
                         const CodebookSet& weak_books, double p_strong,
                         double p_weak, const FactorGraph& F_strong,
                         const FactorGraph& F_weak, const MpaConfig& cfg,
                         const std::vector<int>* genie_strong_words = nullptr);

}  // namespace hdnoma
