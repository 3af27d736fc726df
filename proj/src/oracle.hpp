#pragma once

#include <functional>

#include "rate_model.hpp"

namespace hdnoma {

// Enumerates every binary assignment with row sums == row_degree and column
// sums == col_degree, in lexicographic order of the per-user support choices.
// Returns the number of graphs visited. Throws BudgetError if the search
// space C(subcarriers, row_degree)^users exceeds `budget`.
uint64_t enumerate_feasible_graphs(int users, int subcarriers, int row_degree,
                                   int col_degree, uint64_t budget,
                                   const std::function<void(const FactorGraph&)>& visit);

struct OracleConfig {
  double max_power_w = 1.0;
  double qos_threshold = 0.0;
  int row_degree_strong = 2;
  int col_degree_strong = 3;
  int row_degree_weak = 2;
  int col_degree_weak = 3;
  int p_grid = 200;            // grid points per power axis, endpoints included
  uint64_t enum_budget = 1u << 24;
};

struct OracleResult {
  double p_strong = 0.0;
  double p_weak = 0.0;
  FactorGraph graph_strong;
  FactorGraph graph_weak;
  double strong_rate = 0.0;
  double weak_rate = 0.0;
  uint64_t pairs_examined = 0;
};

// Brute-force reference allocator: enumerate all feasible assignment pairs
// and search the power grid over [0, P/row_degree]^2. The strong rate falls
// in every coordinate as p_weak grows and rises in p_strong, so for each
// weak graph the grid search reduces to the smallest feasible weak power and
// the largest strong power; exhaustive_best_full_grid below keeps the
// unreduced scan for cross-checking. Ties break toward the earlier
// enumeration order.
OracleResult exhaustive_best(const GainTable& g, const OracleConfig& cfg);

// Same optimum via the full p-grid scan per graph pair; O(p_grid^2) slower.
OracleResult exhaustive_best_full_grid(const GainTable& g, const OracleConfig& cfg);

}  // namespace hdnoma
