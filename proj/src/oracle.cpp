#include "oracle.hpp"

#include <cmath>
#include <sstream>

namespace hdnoma {

namespace {

// all size-row_degree subsets of {0..subcarriers-1}, lexicographic
std::vector<std::vector<int>> all_supports(int subcarriers, int row_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> subset(row_degree);
  for (int i = 0; i < row_degree; ++i) subset[i] = i;
  for (;;) {
    out.push_back(subset);
    int i = row_degree - 1;
    while (i >= 0 && subset[i] == subcarriers - row_degree + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int t = i + 1; t < row_degree; ++t) subset[t] = subset[t - 1] + 1;
  }
  return out;
}

}  // namespace

uint64_t enumerate_feasible_graphs(int users, int subcarriers, int row_degree,
                                   int col_degree, uint64_t budget,
                                   const std::function<void(const FactorGraph&)>& visit) {
  if (users < 1 || subcarriers < 1 || row_degree < 1 || row_degree > subcarriers)
    throw std::invalid_argument("enumerate_feasible_graphs: bad dimensions");
  if (long(users) * row_degree != long(subcarriers) * col_degree) return 0;

  const auto supports = all_supports(subcarriers, row_degree);
  double space = std::pow(double(supports.size()), double(users));
  if (space > double(budget)) {
    std::ostringstream os;
    os << "enumerate_feasible_graphs: " << supports.size() << "^" << users << " = "
       << space << " support tuples exceed budget " << budget;
    throw BudgetError(os.str());
  }

  FactorGraph g;
  g.users = users;
  g.subcarriers = subcarriers;
  g.row_degree = row_degree;
  g.col_degree = col_degree;
  g.entries.assign(size_t(users) * subcarriers, 0);

  std::vector<int> col(subcarriers, 0);
  std::vector<int> choice(users, -1);
  uint64_t count = 0;

  // depth-first over per-user support choices with column-capacity pruning
  std::function<void(int)> dfs = [&](int user) {
    if (user == users) {
      ++count;
      visit(g);
      return;
    }
    int remaining = users - user;
    for (size_t c = 0; c < supports.size(); ++c) {
      bool ok = true;
      for (int k : supports[c])
        if (col[k] + 1 > col_degree) {
          ok = false;
          break;
        }
      if (!ok) continue;
      // each later user adds at most one to a column; prune columns that can
      // no longer reach col_degree
      for (int k : supports[c]) {
        ++col[k];
        g.set(user, k, 1);
      }
      bool reachable = true;
      for (int k = 0; k < subcarriers && reachable; ++k)
        if (col[k] + (remaining - 1) < col_degree) reachable = false;
      if (reachable) {
        choice[user] = int(c);
        dfs(user + 1);
      }
      for (int k : supports[c]) {
        --col[k];
        g.set(user, k, 0);
      }
    }
  };
  dfs(0);
  return count;
}

namespace {

Eigen::VectorXd column_loads(const Eigen::MatrixXd& gains, const FactorGraph& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.subcarriers);
  for (int k = 0; k < f.subcarriers; ++k)
    for (int j = 0; j < f.users; ++j)
      if (f.at(j, k)) out(k) += gains(j, k);
  return out;
}

double rate_over_noise(const Eigen::VectorXd& signal, const Eigen::VectorXd& interference,
                       double noise) {
  double sr = 0.0;
  for (int k = 0; k < signal.size(); ++k)
    sr += std::log2(1.0 + signal(k) / (interference(k) + noise));
  return sr;
}

struct Candidates {
  std::vector<FactorGraph> graphs;
  std::vector<Eigen::VectorXd> loads;  // per graph: sum_j g(j,k) f(j,k)
};

Candidates collect(const Eigen::MatrixXd& gains, int users, int subcarriers,
                   int row_degree, int col_degree, uint64_t budget) {
  Candidates c;
  enumerate_feasible_graphs(users, subcarriers, row_degree, col_degree, budget,
                            [&](const FactorGraph& g) {
                              c.graphs.push_back(g);
                              c.loads.push_back(column_loads(gains, g));
                            });
  return c;
}

}  // namespace

OracleResult exhaustive_best(const GainTable& g, const OracleConfig& cfg) {
  const int K = g.subcarriers();
  Candidates strong = collect(g.strong, int(g.strong.rows()), K, cfg.row_degree_strong,
                              cfg.col_degree_strong, cfg.enum_budget);
  Candidates weak = collect(g.weak, int(g.weak.rows()), K, cfg.row_degree_weak,
                            cfg.col_degree_weak, cfg.enum_budget);

  const double cap_s = cfg.max_power_w / cfg.row_degree_strong;
  const double cap_w = cfg.max_power_w / cfg.row_degree_weak;
  const int n = std::max(cfg.p_grid, 2);
  auto grid_value = [&](double cap, int idx) { return cap * double(idx) / double(n - 1); };

  OracleResult best;
  double best_rate = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd noise_vec = Eigen::VectorXd::Zero(K);

  for (size_t wi = 0; wi < weak.graphs.size(); ++wi) {
    // smallest grid power meeting the weak-group floor; the strong rate only
    // falls as p_weak rises
    int pw_idx = -1;
    double weak_rate = 0.0;
    for (int i = 0; i < n; ++i) {
      double pw = grid_value(cap_w, i);
      double sr = rate_over_noise(pw * weak.loads[wi], noise_vec, g.noise_var);
      if (sr >= cfg.qos_threshold) {
        pw_idx = i;
        weak_rate = sr;
        break;
      }
    }
    if (pw_idx < 0) continue;
    double pw = grid_value(cap_w, pw_idx);
    Eigen::VectorXd interference = pw * weak.loads[wi];

    for (size_t si = 0; si < strong.graphs.size(); ++si) {
      ++best.pairs_examined;
      double sr = rate_over_noise(cap_s * strong.loads[si], interference, g.noise_var);
      if (sr > best_rate) {
        best_rate = sr;
        best.p_strong = cap_s;
        best.p_weak = pw;
        best.graph_strong = strong.graphs[si];
        best.graph_weak = weak.graphs[wi];
        best.strong_rate = sr;
        best.weak_rate = weak_rate;
      }
    }
  }
  if (best_rate == -std::numeric_limits<double>::infinity())
    throw InfeasibleError("exhaustive_best: no assignment pair meets the rate floor");
  return best;
}

OracleResult exhaustive_best_full_grid(const GainTable& g, const OracleConfig& cfg) {
  const int K = g.subcarriers();
  Candidates strong = collect(g.strong, int(g.strong.rows()), K, cfg.row_degree_strong,
                              cfg.col_degree_strong, cfg.enum_budget);
  Candidates weak = collect(g.weak, int(g.weak.rows()), K, cfg.row_degree_weak,
                            cfg.col_degree_weak, cfg.enum_budget);

  const double cap_s = cfg.max_power_w / cfg.row_degree_strong;
  const double cap_w = cfg.max_power_w / cfg.row_degree_weak;
  const int n = std::max(cfg.p_grid, 2);
  auto grid_value = [&](double cap, int idx) { return cap * double(idx) / double(n - 1); };

  OracleResult best;
  double best_rate = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd noise_vec = Eigen::VectorXd::Zero(K);

  for (size_t wi = 0; wi < weak.graphs.size(); ++wi)
    for (int iw = 0; iw < n; ++iw) {
      double pw = grid_value(cap_w, iw);
      double wr = rate_over_noise(pw * weak.loads[wi], noise_vec, g.noise_var);
      if (wr < cfg.qos_threshold) continue;
      Eigen::VectorXd interference = pw * weak.loads[wi];
      for (size_t si = 0; si < strong.graphs.size(); ++si)
        for (int is = 0; is < n; ++is) {
          ++best.pairs_examined;
          double ps = grid_value(cap_s, is);
          double sr = rate_over_noise(ps * strong.loads[si], interference, g.noise_var);
          if (sr > best_rate) {
            best_rate = sr;
            best.p_strong = ps;
            best.p_weak = pw;
            best.graph_strong = strong.graphs[si];
            best.graph_weak = weak.graphs[wi];
            best.strong_rate = sr;
            best.weak_rate = wr;
          }
        }
    }
  if (best_rate == -std::numeric_limits<double>::infinity())
    throw InfeasibleError("exhaustive_best_full_grid: no assignment pair meets the rate floor");
  return best;
}

}  // namespace hdnoma
