#include "mpa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdnoma {

namespace {

struct Checked {
  int users;
  int dims;
  int words;
};

Checked check_inputs(const CVec& y, const CodebookSet& books,
                     const std::vector<CVec>& channels,
                     const std::vector<double>& noise_var_per_sc) {
  const int J = books.user_count();
  const int K = books.dims;
  if (int(y.size()) != K) throw std::invalid_argument("decode: observation length mismatch");
  if (int(channels.size()) != J)
    throw std::invalid_argument("decode: channel count does not match codebooks");
  for (const CVec& h : channels)
    if (int(h.size()) != K)
      throw std::invalid_argument("decode: channel vector length mismatch");
  if (int(noise_var_per_sc.size()) != K)
    throw std::invalid_argument("decode: noise variance vector length mismatch");
  for (double v : noise_var_per_sc)
    if (!(v > 0.0)) throw std::invalid_argument("decode: noise variance must be > 0");
  return {J, K, books.num_words};
}

// sqrt(p) * h(j,k) * x(j,m,k) for the active subcarriers of every user.
struct ScaledWords {
  // per subcarrier: member user indices and their M per-subcarrier symbols
  std::vector<std::vector<int>> members;           // K x d_v(k)
  std::vector<std::vector<CVec>> symbols;          // K x d_v(k) x M
};

ScaledWords scale_words(const CodebookSet& books, const std::vector<CVec>& channels,
                        double power_w) {
  const int K = books.dims;
  const int M = books.num_words;
  const double amp = std::sqrt(power_w);
  ScaledWords sw;
  sw.members.resize(K);
  sw.symbols.resize(K);
  for (int j = 0; j < books.user_count(); ++j) {
    for (int k : books.users[j].support) {
      sw.members[k].push_back(j);
      CVec syms(M);
      for (int m = 0; m < M; ++m) syms[m] = amp * channels[j][k] * books.users[j].words[m][k];
      sw.symbols[k].push_back(std::move(syms));
    }
  }
  return sw;
}

void normalize_log(std::vector<double>& v) {
  LogAcc acc;
  for (double x : v) acc.add(x);
  double z = acc.value();
  for (double& x : v) x -= z;
}

std::vector<double> to_probs(const std::vector<double>& log_marg) {
  double mx = log_marg[0];
  for (double v : log_marg) mx = std::max(mx, v);
  std::vector<double> p(log_marg.size());
  double z = 0.0;
  for (size_t m = 0; m < log_marg.size(); ++m) {
    p[m] = std::exp(log_marg[m] - mx);
    z += p[m];
  }
  for (double& v : p) v /= z;
  return p;
}

int argmax_word(const std::vector<double>& v) {
  int best = 0;
  for (size_t m = 1; m < v.size(); ++m)
    if (v[m] > v[best]) best = int(m);
  return best;
}

}  // namespace

DecodeResult mpa_decode(const CVec& y, const CodebookSet& books,
                        const std::vector<CVec>& channels, double power_w,
                        const std::vector<double>& noise_var_per_sc,
                        const MpaConfig& cfg) {
  if (cfg.iterations < 1) throw std::invalid_argument("mpa_decode: iterations must be >= 1");
  const auto [J, K, M] = check_inputs(y, books, channels, noise_var_per_sc);
  ScaledWords sw = scale_words(books, channels, power_w);

  // Message storage indexed by (subcarrier, member position, word).
  auto zeros_like = [&](std::vector<std::vector<std::vector<double>>>& msg) {
    msg.assign(K, {});
    for (int k = 0; k < K; ++k)
      msg[k].assign(sw.members[k].size(), std::vector<double>(M, 0.0));
  };
  std::vector<std::vector<std::vector<double>>> fn_to_vn, vn_to_fn;
  zeros_like(fn_to_vn);
  zeros_like(vn_to_fn);

  // Where each user appears: list of (subcarrier, position in that column).
  std::vector<std::vector<std::pair<int, int>>> user_slots(J);
  for (int k = 0; k < K; ++k)
    for (size_t pos = 0; pos < sw.members[k].size(); ++pos)
      user_slots[sw.members[k][pos]].push_back({k, int(pos)});

  DecodeResult out;
  const bool maxlog = cfg.variant == MpaVariant::max_log;
  std::vector<int> word(16, 0);
  std::vector<double> nu_cache;

  for (int it = 0; it < cfg.iterations; ++it) {
    // Function-node update: enumerate all word tuples per subcarrier once and
    // serve every member from the same pass.
    for (int k = 0; k < K; ++k) {
      const auto& mem = sw.members[k];
      const int d = int(mem.size());
      if (d == 0) continue;
      std::vector<std::vector<LogAcc>> acc(d, std::vector<LogAcc>(M));
      const double inv_var = 1.0 / noise_var_per_sc[k];

      std::fill(word.begin(), word.begin() + d, 0);
      uint64_t tuples = 1;
      for (int u = 0; u < d; ++u) tuples *= uint64_t(M);
      out.fn_hypotheses += tuples;
      for (uint64_t t = 0; t < tuples; ++t) {
        cplx resid = y[k];
        double nu_sum = 0.0;
        for (int u = 0; u < d; ++u) {
          resid -= sw.symbols[k][u][word[u]];
          nu_sum += vn_to_fn[k][u][word[u]];
        }
        double total = -std::norm(resid) * inv_var + cfg.log_metric_offset + nu_sum;
        for (int u = 0; u < d; ++u) {
          double v = total - vn_to_fn[k][u][word[u]];
          if (maxlog)
            acc[u][word[u]].add_max(v);
          else
            acc[u][word[u]].add(v);
        }
        // odometer
        for (int u = 0; u < d; ++u) {
          if (++word[u] < M) break;
          word[u] = 0;
        }
      }
      for (int u = 0; u < d; ++u)
        for (int m = 0; m < M; ++m) fn_to_vn[k][u][m] = acc[u][m].value();
    }

    // Variable-node update: combine the other subcarriers' messages and
    // renormalize so user beliefs stay proper distributions every round.
    for (int j = 0; j < J; ++j) {
      const auto& slots = user_slots[j];
      for (size_t a = 0; a < slots.size(); ++a) {
        auto [k, pos] = slots[a];
        std::vector<double> msg(M, 0.0);
        for (size_t b = 0; b < slots.size(); ++b) {
          if (b == a) continue;
          auto [k2, pos2] = slots[b];
          for (int m = 0; m < M; ++m) msg[m] += fn_to_vn[k2][pos2][m];
        }
        normalize_log(msg);
        vn_to_fn[k][pos] = std::move(msg);
      }
    }
  }

  out.marginals.probs.resize(J);
  out.decisions.resize(J);
  for (int j = 0; j < J; ++j) {
    std::vector<double> log_marg(M, 0.0);
    for (auto [k, pos] : user_slots[j])
      for (int m = 0; m < M; ++m) log_marg[m] += fn_to_vn[k][pos][m];
    out.marginals.probs[j] = to_probs(log_marg);
    out.decisions[j] = argmax_word(out.marginals.probs[j]);
  }
  return out;
}

DecodeResult mpa_decode(const CVec& y, const CodebookSet& books,
                        const std::vector<CVec>& channels, double power_w,
                        double noise_var_w, const MpaConfig& cfg) {
  return mpa_decode(y, books, channels, power_w,
                    std::vector<double>(books.dims, noise_var_w), cfg);
}

DecodeResult map_oracle_decode(const CVec& y, const CodebookSet& books,
                               const std::vector<CVec>& channels, double power_w,
                               const std::vector<double>& noise_var_per_sc,
                               uint64_t budget) {
  const auto [J, K, M] = check_inputs(y, books, channels, noise_var_per_sc);
  double tuples_d = std::pow(double(M), double(J));
  if (tuples_d > double(budget)) {
    throw BudgetError("map_oracle_decode: " + std::to_string(tuples_d) +
                      " tuples exceed budget " + std::to_string(budget));
  }
  const uint64_t tuples = uint64_t(tuples_d);
  ScaledWords sw = scale_words(books, channels, power_w);

  // Per-user scaled symbols on their own supports, for fast partial updates.
  std::vector<std::vector<std::pair<int, const CVec*>>> user_syms(J);
  for (int k = 0; k < K; ++k)
    for (size_t pos = 0; pos < sw.members[k].size(); ++pos)
      user_syms[sw.members[k][pos]].push_back({k, &sw.symbols[k][pos]});

  std::vector<std::vector<LogAcc>> marg(J, std::vector<LogAcc>(M));
  std::vector<int> word(J, 0);
  CVec resid = y;  // y minus the currently loaded superposition
  for (int j = 0; j < J; ++j)
    for (auto& [k, syms] : user_syms[j]) resid[k] -= (*syms)[0];

  for (uint64_t t = 0;; ++t) {
    double metric = 0.0;
    for (int k = 0; k < K; ++k) metric -= std::norm(resid[k]) / noise_var_per_sc[k];
    for (int j = 0; j < J; ++j) marg[j][word[j]].add(metric);
    if (t + 1 == tuples) break;
    // odometer with incremental residual updates
    for (int j = 0; j < J; ++j) {
      int prev = word[j];
      int next = prev + 1 == M ? 0 : prev + 1;
      word[j] = next;
      for (auto& [k, syms] : user_syms[j]) resid[k] += (*syms)[prev] - (*syms)[next];
      if (next != 0) break;
    }
  }

  DecodeResult out;
  out.marginals.probs.resize(J);
  out.decisions.resize(J);
  for (int j = 0; j < J; ++j) {
    std::vector<double> lm(M);
    for (int m = 0; m < M; ++m) lm[m] = marg[j][m].value();
    out.marginals.probs[j] = to_probs(lm);
    out.decisions[j] = argmax_word(out.marginals.probs[j]);
  }
  return out;
}

DecodeResult map_oracle_decode(const CVec& y, const CodebookSet& books,
                               const std::vector<CVec>& channels, double power_w,
                               double noise_var_w, uint64_t budget) {
  return map_oracle_decode(y, books, channels, power_w,
                           std::vector<double>(books.dims, noise_var_w), budget);
}

std::vector<double> effective_noise_for_strong(double noise_var_w,
                                               const std::vector<CVec>& weak_channels,
                                               double p_weak,
                                               const FactorGraph& weak_graph) {
  if (int(weak_channels.size()) != weak_graph.users)
    throw std::invalid_argument("effective_noise_for_strong: channel count mismatch");
  std::vector<double> out(weak_graph.subcarriers, noise_var_w);
  for (int j = 0; j < weak_graph.users; ++j)
    for (int k = 0; k < weak_graph.subcarriers; ++k)
      if (weak_graph.at(j, k)) out[k] += p_weak * std::norm(weak_channels[j][k]);
  return out;
}

}  // namespace hdnoma
