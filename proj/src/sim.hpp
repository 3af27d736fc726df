#pragma once

#include <string>

#include "hd_receiver.hpp"
#include "optimizer.hpp"
#include "oracle.hpp"

namespace hdnoma {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Scheme { hd_noma, scma6, scma12, pd_noma12 };
Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct SimConfig {
  Scheme scheme = Scheme::hd_noma;
  double power_dbm_min = 30.0;
  double power_dbm_max = 40.0;
  double power_dbm_step = 2.0;
  int trials = 2000;
  uint64_t seed = 1;
  int threads = 1;
  double bw_hz = 1e6;
  double d_strong_km = 0.3;
  double d_weak_km = 0.8;
  bool noiseless = false;
  bool genie_sic = false;
  bool with_oracle = false;
  int p_grid = 200;
  MpaConfig mpa;
  OptimizerConfig opt;  // max_power_w is set per sweep point
  std::string codebook_path;  // empty: built-in set

  void validate() const;  // throws ConfigError
  std::vector<double> power_points_dbm() const;
};

// Flat key/value settings mirroring the CLI flags (keys are the flag names
// without the leading dashes). Throws ConfigError on unknown keys or
// unparseable values.
void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value);

// One `key = value` (or `key value`) pair per line; '#' starts a comment.
void load_config_file(SimConfig& cfg, const std::string& path);

struct SweepRow {
  std::string scheme;
  double power_dbm = 0.0;
  std::string metric;
  double value = 0.0;
  uint64_t trials = 0;
  uint64_t seed = 0;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct BerCounts {
  uint64_t strong_errors = 0;
  uint64_t strong_bits = 0;
  uint64_t weak_errors = 0;
  uint64_t weak_bits = 0;

  BerCounts& operator+=(const BerCounts& o);
  double strong_ber() const { return strong_bits ? double(strong_errors) / double(strong_bits) : 0.0; }
  double weak_ber() const { return weak_bits ? double(weak_errors) / double(weak_bits) : 0.0; }
  double total_ber() const {
    uint64_t bits = strong_bits + weak_bits;
    return bits ? double(strong_errors + weak_errors) / double(bits) : 0.0;
  }
};

// Fixed per-run structures (codebooks, graphs, link budget skeleton).
struct SimContext {
  CodebookSet books_single;  // the 6-user set (built-in or loaded)
  CodebookSet books_double;  // two rotated layers for the 12-user SCMA
  CodebookSet books_spread;  // full-spread QPSK for the power-domain baseline
  FactorGraph graph_single;
  FactorGraph graph_double;
  LinkBudget budget;  // max_power_w filled per power point

  static SimContext make(const SimConfig& cfg);
};

// One Monte Carlo trial of one scheme at per-user budget P (watts). The trial
// seed fixes the channel, data, and noise draws.
BerCounts ber_trial(const SimContext& ctx, const SimConfig& cfg, Scheme scheme,
                    double power_w, uint64_t trial_seed);

std::vector<SweepRow> run_ber_experiment(const SimConfig& cfg);

// All sum-rate figures for one channel draw at per-user budget P.
struct SumrateDraw {
  double hd_total = 0.0;
  double hd_objective = 0.0;  // strong-group rate, the optimizer objective
  double hd_equal_total = 0.0;
  double hd_equal_objective = 0.0;
  bool has_oracle = false;
  double oracle_total = 0.0;
  double oracle_objective = 0.0;
  double scma6 = 0.0;
  double scma12 = 0.0;
  double pdnoma12 = 0.0;
};
SumrateDraw eval_sumrate_draw(const SimContext& ctx, const SimConfig& cfg,
                              double power_w, uint64_t trial_seed);

std::vector<SweepRow> run_sumrate_sweep(const SimConfig& cfg);

struct ConvergeRow {
  double power_dbm = 0.0;
  uint64_t trial = 0;
  int iter = 0;
  char stage = 'i';
  double objective = 0.0;
};

std::string converge_csv(const std::vector<ConvergeRow>& rows);

std::vector<ConvergeRow> run_convergence_trace(const SimConfig& cfg);

// Deterministic trial scheduling: results land in per-trial slots and are
// reduced in index order, so the aggregate is independent of `threads`.
void parallel_for_trials(uint64_t count, int threads,
                         const std::function<void(uint64_t)>& fn);

}  // namespace hdnoma
