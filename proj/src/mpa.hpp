#pragma once

#include <cstdint>

#include "channel.hpp"
#include "codebook.hpp"
#include "factor_graph.hpp"

namespace hdnoma {

// Per-user posterior over the M words; rows sum to one.
struct MarginalTable {
  std::vector<std::vector<double>> probs;
};

enum class MpaVariant { sum_product, max_log };

struct MpaConfig {
  int iterations = 6;
  MpaVariant variant = MpaVariant::sum_product;
  // Added to every function-node metric. Decisions and marginals are
  // invariant to it (log-domain shift); kept settable so tests can assert
  // that.
  double log_metric_offset = 0.0;
};

struct DecodeResult {
  MarginalTable marginals;
  std::vector<int> decisions;
  uint64_t fn_hypotheses = 0;  // tuples enumerated across all function nodes
};

// Log-domain message passing over the graph induced by the codebook supports.
// Each user's prior is uniform; after `iterations` rounds the hard decision
// is the per-user posterior argmax (lowest index on ties). noise_var_per_sc
// holds one variance per subcarrier so the strong decoding stage can inflate
// noise where weak users land.
DecodeResult mpa_decode(const CVec& y, const CodebookSet& books,
                        const std::vector<CVec>& channels, double power_w,
                        const std::vector<double>& noise_var_per_sc,
                        const MpaConfig& cfg);
DecodeResult mpa_decode(const CVec& y, const CodebookSet& books,
                        const std::vector<CVec>& channels, double power_w,
                        double noise_var_w, const MpaConfig& cfg);

// Exact posterior by enumerating all M^J word tuples under the Gaussian
// likelihood; the correctness reference for mpa_decode. Throws BudgetError
// when M^J exceeds `budget`.
DecodeResult map_oracle_decode(const CVec& y, const CodebookSet& books,
                               const std::vector<CVec>& channels, double power_w,
                               const std::vector<double>& noise_var_per_sc,
                               uint64_t budget = 1u << 20);
DecodeResult map_oracle_decode(const CVec& y, const CodebookSet& books,
                               const std::vector<CVec>& channels, double power_w,
                               double noise_var_w, uint64_t budget = 1u << 20);

// Noise the strong stage sees on each subcarrier: thermal variance plus the
// power of every weak user assigned there.
std::vector<double> effective_noise_for_strong(double noise_var_w,
                                               const std::vector<CVec>& weak_channels,
                                               double p_weak,
                                               const FactorGraph& weak_graph);

}  // namespace hdnoma
