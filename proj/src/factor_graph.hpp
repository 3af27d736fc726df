#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hdnoma {

// Binary user-to-subcarrier assignment with regular degrees: every user
// occupies exactly row_degree subcarriers and every subcarrier carries
// exactly col_degree users. Degree balance requires
// users * row_degree == subcarriers * col_degree.
struct FactorGraph {
  int users = 0;
  int subcarriers = 0;
  int row_degree = 0;  // subcarriers per user (d_f)
  int col_degree = 0;  // users per subcarrier (d_v)
  std::vector<uint8_t> entries;  // row-major users x subcarriers

  uint8_t at(int user, int sc) const {
    return entries[size_t(user) * subcarriers + sc];
  }
  void set(int user, int sc, uint8_t v) {
    entries[size_t(user) * subcarriers + sc] = v;
  }
  double overloading_factor() const { return double(users) / double(subcarriers); }
  std::vector<int> row_support(int user) const;
  std::vector<int> users_on_subcarrier(int sc) const;
};

// Box-relaxed assignment used inside the allocator; entries live in [0,1].
struct RelaxedFactorGraph {
  Eigen::MatrixXd entries;  // users x subcarriers

  int users() const { return int(entries.rows()); }
  int subcarriers() const { return int(entries.cols()); }
};

RelaxedFactorGraph relax(const FactorGraph& g);

struct GraphViolation {
  enum class Kind { entry_not_binary, row_sum, col_sum, degree_balance };
  Kind kind;
  int index = 0;      // row or column; unused for degree_balance
  double expected = 0;
  double actual = 0;
  std::string describe() const;
};

struct GraphCheck {
  bool ok = true;
  std::vector<GraphViolation> violations;
};

uint64_t binomial(int n, int k);

// Assignment whose rows are the first `users` size-row_degree subsets of the
// subcarrier set in lexicographic order. Throws std::invalid_argument when
// the subset pool is exhausted or the resulting degrees cannot balance.
FactorGraph canonical_factor_graph(int users, int subcarriers, int row_degree);

// Checks binary entries and exact row/column degrees; returns all violations
// rather than throwing.
GraphCheck validate_factor_graph(const FactorGraph& g);

}  // namespace hdnoma
