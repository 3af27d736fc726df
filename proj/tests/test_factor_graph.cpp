#include <doctest.h>

#include "factor_graph.hpp"

using namespace hdnoma;

TEST_CASE("canonical 6x4 graph matches the lexicographic support list") {
  FactorGraph g = canonical_factor_graph(6, 4, 2);
  CHECK(g.users == 6);
  CHECK(g.subcarriers == 4);
  CHECK(g.row_degree == 2);
  CHECK(g.col_degree == 3);
  CHECK(g.overloading_factor() == doctest::Approx(1.5));
  const std::vector<std::vector<int>> want = {{0, 1}, {0, 2}, {0, 3},
                                              {1, 2}, {1, 3}, {2, 3}};
  for (int j = 0; j < 6; ++j) CHECK(g.row_support(j) == want[j]);
  CHECK(validate_factor_graph(g).ok);
}

TEST_CASE("canonical degenerate and diagonal graphs") {
  FactorGraph one = canonical_factor_graph(1, 1, 1);
  CHECK(one.entries == std::vector<uint8_t>{1});
  CHECK(validate_factor_graph(one).ok);

  FactorGraph diag = canonical_factor_graph(4, 4, 1);
  CHECK(diag.col_degree == 1);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) CHECK(int(diag.at(j, k)) == (j == k ? 1 : 0));
}

TEST_CASE("canonical graph rejects infeasible requests") {
  CHECK_THROWS_AS(canonical_factor_graph(7, 4, 2), std::invalid_argument);  // > C(4,2)
  CHECK_THROWS_AS(canonical_factor_graph(3, 4, 2), std::invalid_argument);  // d_v = 1.5
  CHECK_THROWS_AS(canonical_factor_graph(2, 4, 2), std::invalid_argument);  // unbalanced
  CHECK_THROWS_AS(canonical_factor_graph(6, 4, 0), std::invalid_argument);
}

TEST_CASE("validation reports flipped entries and all-zero graphs") {
  FactorGraph g = canonical_factor_graph(6, 4, 2);
  g.set(0, 0, 0);
  GraphCheck check = validate_factor_graph(g);
  CHECK_FALSE(check.ok);
  bool row_hit = false, col_hit = false;
  for (const GraphViolation& v : check.violations) {
    if (v.kind == GraphViolation::Kind::row_sum && v.index == 0) row_hit = true;
    if (v.kind == GraphViolation::Kind::col_sum && v.index == 0) col_hit = true;
  }
  CHECK(row_hit);
  CHECK(col_hit);

  FactorGraph zero = canonical_factor_graph(6, 4, 2);
  zero.entries.assign(zero.entries.size(), 0);
  GraphCheck zc = validate_factor_graph(zero);
  CHECK_FALSE(zc.ok);
  int rows = 0, cols = 0;
  for (const GraphViolation& v : zc.violations) {
    rows += v.kind == GraphViolation::Kind::row_sum;
    cols += v.kind == GraphViolation::Kind::col_sum;
  }
  CHECK(rows == 6);
  CHECK(cols == 4);
}

TEST_CASE("validation flags non-binary entries") {
  FactorGraph g = canonical_factor_graph(1, 1, 1);
  g.entries[0] = 2;
  GraphCheck check = validate_factor_graph(g);
  CHECK_FALSE(check.ok);
  CHECK(check.violations[0].kind == GraphViolation::Kind::entry_not_binary);
  CHECK(!check.violations[0].describe().empty());
}

TEST_CASE("canonical graphs validate and have distinct rows across shapes") {
  // full support pools balance automatically
  const std::tuple<int, int, int> shapes[] = {{6, 4, 2}, {4, 4, 1}, {1, 1, 1},
                                              {10, 5, 2}, {20, 6, 3}, {15, 6, 2}};
  for (auto [j, k, df] : shapes) {
    FactorGraph g = canonical_factor_graph(j, k, df);
    CHECK(validate_factor_graph(g).ok);
    for (int a = 0; a < g.users; ++a)
      for (int b = a + 1; b < g.users; ++b)
        CHECK(g.row_support(a) != g.row_support(b));
  }
}

TEST_CASE("binomial") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 5) == 0);
}
