#include "sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace hdnoma {

Scheme parse_scheme(const std::string& name) {
  if (name == "hd-noma") return Scheme::hd_noma;
  if (name == "scma6") return Scheme::scma6;
  if (name == "scma12") return Scheme::scma12;
  if (name == "pd-noma12") return Scheme::pd_noma12;
  throw ConfigError("unknown scheme '" + name +
                    "' (want hd-noma, scma6, scma12, or pd-noma12)");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::hd_noma: return "hd-noma";
    case Scheme::scma6: return "scma6";
    case Scheme::scma12: return "scma12";
    case Scheme::pd_noma12: return "pd-noma12";
  }
  return "?";
}

void SimConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(power_dbm_step > 0.0)) throw ConfigError("power step must be > 0");
  if (power_dbm_max < power_dbm_min) throw ConfigError("power range is empty");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (mpa.iterations < 1) throw ConfigError("mpa-iters must be >= 1");
  if (!(bw_hz > 0.0)) throw ConfigError("bw-hz must be > 0");
  if (!(d_strong_km > 0.0) || !(d_weak_km > 0.0))
    throw ConfigError("distances must be > 0");
  if (p_grid < 2) throw ConfigError("p-grid must be >= 2");
  if (!(opt.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
}

std::vector<double> SimConfig::power_points_dbm() const {
  std::vector<double> out;
  for (double p = power_dbm_min; p <= power_dbm_max + 1e-9; p += power_dbm_step)
    out.push_back(p);
  return out;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("cannot parse boolean '" + v + "' for " + key);
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + v + "' for " + key);
  }
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer '" + v + "' for " + key);
  }
}

}  // namespace

void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scheme") {
    cfg.scheme = parse_scheme(value);
  } else if (key == "power-dbm-min") {
    cfg.power_dbm_min = parse_double(value, key);
  } else if (key == "power-dbm-max") {
    cfg.power_dbm_max = parse_double(value, key);
  } else if (key == "power-dbm-step") {
    cfg.power_dbm_step = parse_double(value, key);
  } else if (key == "power-dbm") {
    cfg.power_dbm_min = cfg.power_dbm_max = parse_double(value, key);
  } else if (key == "trials") {
    cfg.trials = int(parse_long(value, key));
  } else if (key == "seed") {
    cfg.seed = uint64_t(parse_long(value, key));
  } else if (key == "threads") {
    cfg.threads = int(parse_long(value, key));
  } else if (key == "bw-hz") {
    cfg.bw_hz = parse_double(value, key);
  } else if (key == "d-strong-km") {
    cfg.d_strong_km = parse_double(value, key);
  } else if (key == "d-weak-km") {
    cfg.d_weak_km = parse_double(value, key);
  } else if (key == "noiseless") {
    cfg.noiseless = parse_bool(value, key);
  } else if (key == "genie-sic") {
    cfg.genie_sic = parse_bool(value, key);
  } else if (key == "oracle") {
    cfg.with_oracle = parse_bool(value, key);
  } else if (key == "p-grid") {
    cfg.p_grid = int(parse_long(value, key));
  } else if (key == "mpa-iters") {
    cfg.mpa.iterations = int(parse_long(value, key));
  } else if (key == "mpa-variant") {
    if (value == "sumprod")
      cfg.mpa.variant = MpaVariant::sum_product;
    else if (value == "maxlog")
      cfg.mpa.variant = MpaVariant::max_log;
    else
      throw ConfigError("mpa-variant must be sumprod or maxlog, got '" + value + "'");
  } else if (key == "qos-bps-hz") {
    cfg.opt.qos_threshold = parse_double(value, key);
  } else if (key == "penalty") {
    cfg.opt.penalty_weight = parse_double(value, key);
  } else if (key == "epsilon") {
    cfg.opt.epsilon = parse_double(value, key);
  } else if (key == "tol") {
    double t = parse_double(value, key);
    cfg.opt.inner_tol = t;
    cfg.opt.outer_tol = t;
  } else if (key == "max-iters") {
    cfg.opt.max_outer_iters = int(parse_long(value, key));
  } else if (key == "codebook") {
    cfg.codebook_path = value;
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

void load_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value, eq;
    if (!(ls >> key)) continue;  // blank
    if (!(ls >> value)) throw ConfigError(path + ":" + std::to_string(lineno) +
                                          ": missing value for '" + key + "'");
    if (value == "=" && !(ls >> value))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": missing value for '" +
                        key + "'");
    if (ls >> eq)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": trailing content '" +
                        eq + "'");
    apply_setting(cfg, key, value);
  }
}

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "scheme,power_dbm,metric,value,trials,seed\n";
  for (const SweepRow& r : rows)
    os << r.scheme << "," << format_value(r.power_dbm) << "," << r.metric << ","
       << format_value(r.value) << "," << r.trials << "," << r.seed << "\n";
  return os.str();
}

std::string converge_csv(const std::vector<ConvergeRow>& rows) {
  std::ostringstream os;
  os << "power_dbm,trial,iter,stage,objective\n";
  for (const ConvergeRow& r : rows)
    os << format_value(r.power_dbm) << "," << r.trial << "," << r.iter << "," << r.stage
       << "," << format_value(r.objective) << "\n";
  return os.str();
}

BerCounts& BerCounts::operator+=(const BerCounts& o) {
  strong_errors += o.strong_errors;
  strong_bits += o.strong_bits;
  weak_errors += o.weak_errors;
  weak_bits += o.weak_bits;
  return *this;
}

SimContext SimContext::make(const SimConfig& cfg) {
  SimContext ctx;
  ctx.books_single =
      cfg.codebook_path.empty() ? default_codebook_set() : load_codebook(cfg.codebook_path);
  ctx.books_double = stack_rotated_layers(ctx.books_single, 2);
  ctx.books_spread =
      spread_codebook_set(2 * ctx.books_single.user_count(), ctx.books_single.dims);
  ctx.graph_single = ctx.books_single.factor_graph();
  ctx.graph_double = ctx.books_double.factor_graph();
  ctx.budget.bandwidth_hz = cfg.bw_hz;
  ctx.budget.strong_distance_km = cfg.d_strong_km;
  ctx.budget.weak_distance_km = cfg.d_weak_km;
  return ctx;
}

void parallel_for_trials(uint64_t count, int threads,
                         const std::function<void(uint64_t)>& fn) {
  int workers = int(std::min<uint64_t>(uint64_t(std::max(threads, 1)), count));
  if (workers <= 1) {
    for (uint64_t t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        uint64_t t = next.fetch_add(1);
        if (t >= count) return;
        fn(t);
      }
    });
  for (std::thread& th : pool) th.join();
}

namespace {

int bit_errors(int a, int b) { return std::popcount(unsigned(a) ^ unsigned(b)); }

std::vector<int> draw_words(Rng& rng, int count, int num_words) {
  std::vector<int> w(count);
  for (int& v : w) v = rng.uniform_int(num_words);
  return w;
}

std::vector<CVec> words_to_codewords(const CodebookSet& books, const std::vector<int>& w,
                                     int offset) {
  std::vector<CVec> out;
  out.reserve(w.size());
  for (size_t i = 0; i < w.size(); ++i)
    out.push_back(encode(books, int(i) + offset, unsigned(w[i])));
  return out;
}

// gain-ordered successive cancellation with per-user matched-filter detection
std::vector<int> pd_sic_decode(const CVec& y, const CodebookSet& books,
                               const std::vector<CVec>& chans, double power_w) {
  const int J = books.user_count();
  const int K = books.dims;
  const double amp = std::sqrt(power_w);
  std::vector<int> order(J);
  for (int j = 0; j < J; ++j) order[j] = j;
  std::vector<double> gain(J, 0.0);
  for (int j = 0; j < J; ++j)
    for (int k = 0; k < K; ++k) gain[j] += std::norm(chans[j][k]);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (gain[a] != gain[b]) return gain[a] > gain[b];
    return a < b;
  });

  std::vector<int> decided(J, 0);
  CVec resid = y;
  for (int j : order) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int m = 0; m < books.num_words; ++m) {
      double d = 0.0;
      for (int k = 0; k < K; ++k)
        d += std::norm(resid[k] - amp * chans[j][k] * books.users[j].words[m][k]);
      if (d < best_d) {
        best_d = d;
        best = m;
      }
    }
    decided[j] = best;
    for (int k = 0; k < K; ++k)
      resid[k] -= amp * chans[j][k] * books.users[j].words[best][k];
  }
  return decided;
}

uint64_t count_errors(const std::vector<int>& sent, const std::vector<int>& decided,
                      size_t begin, size_t end) {
  uint64_t e = 0;
  for (size_t i = begin; i < end; ++i) e += uint64_t(bit_errors(sent[i], decided[i]));
  return e;
}

}  // namespace

BerCounts ber_trial(const SimContext& ctx, const SimConfig& cfg, Scheme scheme,
                    double power_w, uint64_t trial_seed) {
  Rng rng(trial_seed);
  const int J = ctx.books_single.user_count();
  const int K = ctx.books_single.dims;
  const int M = ctx.books_single.num_words;
  const int bits = ctx.books_single.bits_per_word();
  ChannelState chan = draw_channel(rng, ctx.budget, J, J, K);
  Rng* noise = cfg.noiseless ? nullptr : &rng;

  BerCounts out;
  switch (scheme) {
    case Scheme::hd_noma: {
      const double p = power_w / ctx.graph_single.row_degree;
      std::vector<int> ws = draw_words(rng, J, M);
      std::vector<int> ww = draw_words(rng, J, M);
      CVec y = synthesize_received(words_to_codewords(ctx.books_single, ws, 0),
                                   words_to_codewords(ctx.books_single, ww, 0), chan, p,
                                   p, noise);
      HdDecodeResult res =
          decode_hd(y, chan, ctx.books_single, ctx.books_single, p, p, ctx.graph_single,
                    ctx.graph_single, cfg.mpa, cfg.genie_sic ? &ws : nullptr);
      out.strong_errors = count_errors(ws, res.strong.decisions, 0, ws.size());
      out.strong_bits = uint64_t(J) * bits;
      out.weak_errors = count_errors(ww, res.weak.decisions, 0, ww.size());
      out.weak_bits = uint64_t(J) * bits;
      break;
    }
    case Scheme::scma6: {
      // two stand-alone six-user systems furnish the strong- and
      // weak-distance counterparts
      const double p = power_w / ctx.graph_single.row_degree;
      std::vector<int> ws = draw_words(rng, J, M);
      std::vector<int> ww = draw_words(rng, J, M);
      ChannelState strong_only{chan.strong, {}, chan.noise_variance_w};
      ChannelState weak_only{chan.weak, {}, chan.noise_variance_w};
      CVec ys = synthesize_received(words_to_codewords(ctx.books_single, ws, 0), {},
                                    strong_only, p, 0.0, noise);
      CVec yw = synthesize_received(words_to_codewords(ctx.books_single, ww, 0), {},
                                    weak_only, p, 0.0, noise);
      DecodeResult rs = mpa_decode(ys, ctx.books_single, chan.strong, p,
                                   chan.noise_variance_w, cfg.mpa);
      DecodeResult rw = mpa_decode(yw, ctx.books_single, chan.weak, p,
                                   chan.noise_variance_w, cfg.mpa);
      out.strong_errors = count_errors(ws, rs.decisions, 0, ws.size());
      out.strong_bits = uint64_t(J) * bits;
      out.weak_errors = count_errors(ww, rw.decisions, 0, ww.size());
      out.weak_bits = uint64_t(J) * bits;
      break;
    }
    case Scheme::scma12: {
      const double p = power_w / ctx.graph_double.row_degree;
      std::vector<int> ws = draw_words(rng, J, M);
      std::vector<int> ww = draw_words(rng, J, M);
      CVec y = synthesize_received(words_to_codewords(ctx.books_double, ws, 0),
                                   words_to_codewords(ctx.books_double, ww, J), chan, p,
                                   p, noise);
      std::vector<CVec> chans = chan.strong;
      chans.insert(chans.end(), chan.weak.begin(), chan.weak.end());
      DecodeResult res =
          mpa_decode(y, ctx.books_double, chans, p, chan.noise_variance_w, cfg.mpa);
      std::vector<int> sent = ws;
      sent.insert(sent.end(), ww.begin(), ww.end());
      out.strong_errors = count_errors(sent, res.decisions, 0, size_t(J));
      out.strong_bits = uint64_t(J) * bits;
      out.weak_errors = count_errors(sent, res.decisions, size_t(J), sent.size());
      out.weak_bits = uint64_t(J) * bits;
      break;
    }
    case Scheme::pd_noma12: {
      const double p = power_w / K;  // full-spread users occupy all subcarriers
      std::vector<int> ws = draw_words(rng, J, M);
      std::vector<int> ww = draw_words(rng, J, M);
      CVec y = synthesize_received(words_to_codewords(ctx.books_spread, ws, 0),
                                   words_to_codewords(ctx.books_spread, ww, J), chan, p,
                                   p, noise);
      std::vector<CVec> chans = chan.strong;
      chans.insert(chans.end(), chan.weak.begin(), chan.weak.end());
      std::vector<int> dec = pd_sic_decode(y, ctx.books_spread, chans, p);
      std::vector<int> sent = ws;
      sent.insert(sent.end(), ww.begin(), ww.end());
      out.strong_errors = count_errors(sent, dec, 0, size_t(J));
      out.strong_bits = uint64_t(J) * bits;
      out.weak_errors = count_errors(sent, dec, size_t(J), sent.size());
      out.weak_bits = uint64_t(J) * bits;
      break;
    }
  }
  return out;
}

std::vector<SweepRow> run_ber_experiment(const SimConfig& cfg) {
  cfg.validate();
  SimContext ctx = SimContext::make(cfg);
  std::vector<SweepRow> rows;
  std::vector<double> powers = cfg.power_points_dbm();
  for (size_t pi = 0; pi < powers.size(); ++pi) {
    const double power_w = dbm_to_watts(powers[pi]);
    std::vector<BerCounts> per_trial(cfg.trials);
    parallel_for_trials(uint64_t(cfg.trials), cfg.threads, [&](uint64_t t) {
      uint64_t stream = (uint64_t(pi) << 32) | t;
      per_trial[t] = ber_trial(ctx, cfg, cfg.scheme, power_w, mix_seed(cfg.seed, stream));
    });
    BerCounts total;
    for (const BerCounts& c : per_trial) total += c;
    const std::string name = to_string(cfg.scheme);
    rows.push_back({name, powers[pi], "ber_strong", total.strong_ber(),
                    uint64_t(cfg.trials), cfg.seed});
    rows.push_back({name, powers[pi], "ber_weak", total.weak_ber(), uint64_t(cfg.trials),
                    cfg.seed});
    rows.push_back({name, powers[pi], "ber_all", total.total_ber(), uint64_t(cfg.trials),
                    cfg.seed});
  }
  return rows;
}

SumrateDraw eval_sumrate_draw(const SimContext& ctx, const SimConfig& cfg,
                              double power_w, uint64_t trial_seed) {
  Rng rng(trial_seed);
  const int J = ctx.books_single.user_count();
  const int K = ctx.books_single.dims;
  ChannelState chan = draw_channel(rng, ctx.budget, J, J, K);
  GainTable gt = GainTable::from_channel(chan);

  OptimizerConfig opt = cfg.opt;
  opt.max_power_w = power_w;
  opt.row_degree_strong = opt.row_degree_weak = ctx.graph_single.row_degree;
  opt.col_degree_strong = opt.col_degree_weak = ctx.graph_single.col_degree;
  if (opt.qos_threshold < 0.0) opt.qos_threshold = default_qos_threshold(gt, opt);

  SumrateDraw d;
  OptimizeResult res = alternating_optimize(gt, opt);
  d.hd_objective = res.strong_rate;
  d.hd_total = res.strong_rate + res.weak_rate;

  RelaxedFactorGraph canon = relax(ctx.graph_single);
  Allocation equal;
  equal.p_strong = power_w / ctx.graph_single.row_degree;
  equal.p_weak = equal.p_strong;
  equal.F_strong = canon;
  equal.F_weak = canon;
  d.hd_equal_objective = sum_rate_strong(equal, gt);
  d.hd_equal_total = d.hd_equal_objective + sum_rate_weak(equal, gt);

  if (cfg.with_oracle) {
    OracleConfig ocfg;
    ocfg.max_power_w = power_w;
    ocfg.qos_threshold = opt.qos_threshold;
    ocfg.row_degree_strong = ocfg.row_degree_weak = ctx.graph_single.row_degree;
    ocfg.col_degree_strong = ocfg.col_degree_weak = ctx.graph_single.col_degree;
    ocfg.p_grid = cfg.p_grid;
    OracleResult ores = exhaustive_best(gt, ocfg);
    d.has_oracle = true;
    d.oracle_objective = ores.strong_rate;
    d.oracle_total = ores.strong_rate + ores.weak_rate;
  }

  d.scma6 = sum_rate_scma(power_w / ctx.graph_single.row_degree, canon, gt.strong,
                          gt.noise_var);

  Eigen::MatrixXd gains12(2 * J, K);
  gains12.topRows(J) = gt.strong;
  gains12.bottomRows(J) = gt.weak;
  d.scma12 = sum_rate_scma(power_w / ctx.graph_double.row_degree,
                           relax(ctx.graph_double), gains12, gt.noise_var);

  RelaxedFactorGraph all_on;
  all_on.entries = Eigen::MatrixXd::Ones(2 * J, K);
  d.pdnoma12 = sum_rate_scma(power_w / K, all_on, gains12, gt.noise_var);
  return d;
}

std::vector<SweepRow> run_sumrate_sweep(const SimConfig& cfg) {
  cfg.validate();
  SimContext ctx = SimContext::make(cfg);
  std::vector<SweepRow> rows;
  std::vector<double> powers = cfg.power_points_dbm();
  for (size_t pi = 0; pi < powers.size(); ++pi) {
    const double power_w = dbm_to_watts(powers[pi]);
    std::vector<SumrateDraw> draws(cfg.trials);
    parallel_for_trials(uint64_t(cfg.trials), cfg.threads, [&](uint64_t t) {
      uint64_t stream = (uint64_t(pi) << 32) | t;
      draws[t] = eval_sumrate_draw(ctx, cfg, power_w, mix_seed(cfg.seed, stream));
    });
    auto mean = [&](auto get) {
      double s = 0.0;
      for (const SumrateDraw& d : draws) s += get(d);
      return s / double(draws.size());
    };
    const uint64_t n = uint64_t(cfg.trials);
    rows.push_back({"hd-noma", powers[pi], "sum_rate",
                    mean([](const SumrateDraw& d) { return d.hd_total; }), n, cfg.seed});
    rows.push_back({"hd-noma", powers[pi], "objective",
                    mean([](const SumrateDraw& d) { return d.hd_objective; }), n,
                    cfg.seed});
    rows.push_back({"hd-noma-equal", powers[pi], "sum_rate",
                    mean([](const SumrateDraw& d) { return d.hd_equal_total; }), n,
                    cfg.seed});
    rows.push_back({"hd-noma-equal", powers[pi], "objective",
                    mean([](const SumrateDraw& d) { return d.hd_equal_objective; }), n,
                    cfg.seed});
    if (cfg.with_oracle) {
      rows.push_back({"hd-noma-oracle", powers[pi], "sum_rate",
                      mean([](const SumrateDraw& d) { return d.oracle_total; }), n,
                      cfg.seed});
      rows.push_back({"hd-noma-oracle", powers[pi], "objective",
                      mean([](const SumrateDraw& d) { return d.oracle_objective; }), n,
                      cfg.seed});
    }
    rows.push_back({"scma6", powers[pi], "sum_rate",
                    mean([](const SumrateDraw& d) { return d.scma6; }), n, cfg.seed});
    rows.push_back({"scma12", powers[pi], "sum_rate",
                    mean([](const SumrateDraw& d) { return d.scma12; }), n, cfg.seed});
    rows.push_back({"pd-noma12", powers[pi], "sum_rate",
                    mean([](const SumrateDraw& d) { return d.pdnoma12; }), n, cfg.seed});
  }
  return rows;
}

std::vector<ConvergeRow> run_convergence_trace(const SimConfig& cfg) {
  cfg.validate();
  SimContext ctx = SimContext::make(cfg);
  std::vector<double> powers = cfg.power_points_dbm();
  const uint64_t total = powers.size() * uint64_t(cfg.trials);
  std::vector<std::vector<ConvergeRow>> slots(total);
  parallel_for_trials(total, cfg.threads, [&](uint64_t idx) {
    const size_t pi = size_t(idx / uint64_t(cfg.trials));
    const uint64_t t = idx % uint64_t(cfg.trials);
    const double power_w = dbm_to_watts(powers[pi]);
    uint64_t stream = (uint64_t(pi) << 32) | t;
    Rng rng(mix_seed(cfg.seed, stream));
    const int J = ctx.books_single.user_count();
    ChannelState chan = draw_channel(rng, ctx.budget, J, J, ctx.books_single.dims);
    GainTable gt = GainTable::from_channel(chan);
    OptimizerConfig opt = cfg.opt;
    opt.max_power_w = power_w;
    opt.row_degree_strong = opt.row_degree_weak = ctx.graph_single.row_degree;
    opt.col_degree_strong = opt.col_degree_weak = ctx.graph_single.col_degree;
    if (opt.qos_threshold < 0.0) opt.qos_threshold = default_qos_threshold(gt, opt);
    OptimizeResult res = alternating_optimize(gt, opt);
    for (const TraceRow& r : res.trace.rows)
      slots[idx].push_back({powers[pi], t, r.outer, r.stage, r.objective});
  });
  std::vector<ConvergeRow> rows;
  for (const auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  return rows;
}

}  // namespace hdnoma
