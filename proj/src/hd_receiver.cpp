#include "hd_receiver.hpp"

#include <cmath>
#include <stdexcept>

namespace hdnoma {

CVec sic_subtract(const CVec& y, const std::vector<int>& strong_decisions,
                  const CodebookSet& strong_books,
                  const std::vector<CVec>& strong_channels, double p_strong) {
  if (strong_decisions.size() != strong_channels.size() ||
      int(strong_decisions.size()) != strong_books.user_count())
    throw std::invalid_argument("sic_subtract: one decision per strong user required");
  const int K = int(y.size());
  CVec out = y;
  const double amp = std::sqrt(p_strong);
  for (size_t i = 0; i < strong_decisions.size(); ++i) {
    const CVec& x = encode(strong_books, int(i), unsigned(strong_decisions[i]));
    if (int(strong_channels[i].size()) != K || int(x.size()) != K)
      throw std::invalid_argument("sic_subtract: dimension mismatch");
    for (int k = 0; k < K; ++k) out[k] -= amp * strong_channels[i][k] * x[k];
  }
  return out;
}

HdDecodeResult decode_hd(const CVec& y, const ChannelState& channels,
                         const CodebookSet& strong_books,
                         const CodebookSet& weak_books, double p_strong,
                         double p_weak, const FactorGraph& F_strong,
                         const FactorGraph& F_weak, const MpaConfig& cfg,
                         const std::vector<int>* genie_strong_words) {
  (void)F_strong;  // structure lives in the codebook supports
  HdDecodeResult out;

  std::vector<double> stage1_noise =
      effective_noise_for_strong(channels.noise_variance_w, channels.weak, p_weak, F_weak);
  out.strong = mpa_decode(y, strong_books, channels.strong, p_strong, stage1_noise, cfg);

  if (weak_books.user_count() == 0) return out;

  const std::vector<int>& subtract_words =
      genie_strong_words ? *genie_strong_words : out.strong.decisions;
  CVec y_sic = sic_subtract(y, subtract_words, strong_books, channels.strong, p_strong);
  out.weak = mpa_decode(y_sic, weak_books, channels.weak, p_weak,
                        channels.noise_variance_w, cfg);
  return out;
}

}  // namespace hdnoma
