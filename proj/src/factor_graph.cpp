#include "factor_graph.hpp"

#include <sstream>
#include <stdexcept>

namespace hdnoma {

std::vector<int> FactorGraph::row_support(int user) const {
  std::vector<int> out;
  out.reserve(row_degree);
  for (int k = 0; k < subcarriers; ++k)
    if (at(user, k)) out.push_back(k);
  return out;
}

std::vector<int> FactorGraph::users_on_subcarrier(int sc) const {
  std::vector<int> out;
  out.reserve(col_degree);
  for (int j = 0; j < users; ++j)
    if (at(j, sc)) out.push_back(j);
  return out;
}

RelaxedFactorGraph relax(const FactorGraph& g) {
  RelaxedFactorGraph r;
  r.entries.resize(g.users, g.subcarriers);
  for (int j = 0; j < g.users; ++j)
    for (int k = 0; k < g.subcarriers; ++k) r.entries(j, k) = g.at(j, k);
  return r;
}

std::string GraphViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::entry_not_binary:
      os << "entry " << index << " is " << actual << ", want 0 or 1";
      break;
    case Kind::row_sum:
      os << "row " << index << " sums to " << actual << ", want " << expected;
      break;
    case Kind::col_sum:
      os << "column " << index << " sums to " << actual << ", want " << expected;
      break;
    case Kind::degree_balance:
      os << "users*row_degree = " << expected << " but subcarriers*col_degree = "
         << actual;
      break;
  }
  return os.str();
}

uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * uint64_t(n - k + i) / uint64_t(i);
  return r;
}

FactorGraph canonical_factor_graph(int users, int subcarriers, int row_degree) {
  if (users < 1 || subcarriers < 1 || row_degree < 1 || row_degree > subcarriers)
    throw std::invalid_argument("canonical_factor_graph: bad dimensions");
  uint64_t pool = binomial(subcarriers, row_degree);
  if (uint64_t(users) > pool) {
    std::ostringstream os;
    os << "canonical_factor_graph: " << users << " users exceed the " << pool
       << " distinct size-" << row_degree << " supports of " << subcarriers
       << " subcarriers";
    throw std::invalid_argument(os.str());
  }
  long total = long(users) * row_degree;
  if (total % subcarriers != 0) {
    std::ostringstream os;
    os << "canonical_factor_graph: degrees infeasible, " << users << "*"
       << row_degree << " not divisible by " << subcarriers;
    throw std::invalid_argument(os.str());
  }

  FactorGraph g;
  g.users = users;
  g.subcarriers = subcarriers;
  g.row_degree = row_degree;
  g.col_degree = int(total / subcarriers);
  g.entries.assign(size_t(users) * subcarriers, 0);

  // Walk size-row_degree subsets of {0..subcarriers-1} in lexicographic order.
  std::vector<int> subset(row_degree);
  for (int i = 0; i < row_degree; ++i) subset[i] = i;
  for (int j = 0; j < users; ++j) {
    for (int s : subset) g.set(j, s, 1);
    // advance to the next subset
    int i = row_degree - 1;
    while (i >= 0 && subset[i] == subcarriers - row_degree + i) --i;
    if (i >= 0) {
      ++subset[i];
      for (int t = i + 1; t < row_degree; ++t) subset[t] = subset[t - 1] + 1;
    }
  }

  // A lexicographic prefix does not always balance the columns even when the
  // average degree is integral; refuse such requests instead of returning an
  // irregular graph.
  GraphCheck check = validate_factor_graph(g);
  if (!check.ok) {
    std::ostringstream os;
    os << "canonical_factor_graph: degrees infeasible, lexicographic prefix of "
       << users << " supports does not balance columns (" << check.violations[0].describe()
       << ")";
    throw std::invalid_argument(os.str());
  }
  return g;
}

GraphCheck validate_factor_graph(const FactorGraph& g) {
  GraphCheck out;
  auto add = [&out](GraphViolation v) {
    out.ok = false;
    out.violations.push_back(std::move(v));
  };

  if (long(g.users) * g.row_degree != long(g.subcarriers) * g.col_degree)
    add({GraphViolation::Kind::degree_balance, 0,
         double(long(g.users) * g.row_degree),
         double(long(g.subcarriers) * g.col_degree)});

  for (size_t i = 0; i < g.entries.size(); ++i)
    if (g.entries[i] > 1)
      add({GraphViolation::Kind::entry_not_binary, int(i), 0.0,
           double(g.entries[i])});

  for (int j = 0; j < g.users; ++j) {
    int sum = 0;
    for (int k = 0; k < g.subcarriers; ++k) sum += g.at(j, k) ? 1 : 0;
    if (sum != g.row_degree)
      add({GraphViolation::Kind::row_sum, j, double(g.row_degree), double(sum)});
  }
  for (int k = 0; k < g.subcarriers; ++k) {
    int sum = 0;
    for (int j = 0; j < g.users; ++j) sum += g.at(j, k) ? 1 : 0;
    if (sum != g.col_degree)
      add({GraphViolation::Kind::col_sum, k, double(g.col_degree), double(sum)});
  }
  return out;
}

}  // namespace hdnoma
