#include <doctest.h>

#include <complex>
#include <fstream>
#include <sstream>

#include "codebook.hpp"

using namespace hdnoma;

namespace {

// test-side reference detector: nearest codeword in Euclidean distance
int nearest_word(const Codebook& cb, const CVec& v) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int m = 0; m < cb.num_words(); ++m) {
    double d = 0.0;
    for (size_t k = 0; k < v.size(); ++k) d += std::norm(v[k] - cb.words[m][k]);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("built-in set: shape, supports, unit energy") {
  CodebookSet set = default_codebook_set();
  CHECK(set.user_count() == 6);
  CHECK(set.num_words == 4);
  CHECK(set.dims == 4);
  CHECK(set.bits_per_word() == 2);
  CHECK(set.spreading_degree() == 2);
  FactorGraph g = set.factor_graph();
  CHECK(validate_factor_graph(g).ok);
  for (const Codebook& cb : set.users) {
    CHECK(cb.average_energy() == doctest::Approx(1.0).epsilon(1e-12));
    for (const CVec& w : cb.words) {
      int nz = 0;
      for (const cplx& c : w) nz += std::norm(c) > 0.0;
      CHECK(nz == 2);
    }
  }
}

TEST_CASE("encode looks up words and rejects bad indices") {
  CodebookSet set = default_codebook_set();
  CHECK(encode(set, 0, 0) == set.users[0].words[0]);
  CHECK(encode(set, 3, 3) == set.users[3].words[3]);
  CHECK_THROWS_AS(encode(set, 0, 4), std::out_of_range);
  CHECK_THROWS_AS(encode(set, 6, 0), std::out_of_range);
}

TEST_CASE("encoding is injective and nearest-codeword inverts it") {
  CodebookSet set = default_codebook_set();
  for (int j = 0; j < set.user_count(); ++j) {
    for (int m = 0; m < set.num_words; ++m) {
      for (int m2 = m + 1; m2 < set.num_words; ++m2)
        CHECK(encode(set, j, m) != encode(set, j, m2));
      CHECK(nearest_word(set.users[j], encode(set, j, m)) == m);
    }
  }
}

TEST_CASE("codebook text format round-trips") {
  CodebookSet set = default_codebook_set();
  std::istringstream in(format_codebook(set));
  CodebookSet back = parse_codebook(in, "roundtrip");
  REQUIRE(back.user_count() == set.user_count());
  for (int j = 0; j < set.user_count(); ++j) {
    CHECK(back.users[j].support == set.users[j].support);
    for (int m = 0; m < set.num_words; ++m)
      for (int k = 0; k < set.dims; ++k)
        CHECK(back.users[j].words[m][k] == set.users[j].words[m][k]);
  }
}

TEST_CASE("loader rejects malformed input") {
  SUBCASE("empty") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_codebook(in, "t"), CodebookError);
  }
  SUBCASE("garbage") {
    std::istringstream in("users x");
    CHECK_THROWS_AS(parse_codebook(in, "t"), CodebookError);
  }
  SUBCASE("support differs between words of one user") {
    std::string text =
        "users 1\nwords 2\ndims 2\nuser 0\n"
        "1 0  0 0\n"   // word 0 active on subcarrier 0
        "0 0  1 0\n";  // word 1 active on subcarrier 1
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(parse_codebook(in, "t"),
                         doctest::Contains("support"), CodebookError);
  }
  SUBCASE("energy off unit") {
    std::string text =
        "users 1\nwords 2\ndims 2\nuser 0\n"
        "2 0  0 0\n"
        "2 0  0 0\n";
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(parse_codebook(in, "t"),
                         doctest::Contains("energy"), CodebookError);
  }
}

TEST_CASE("load_codebook reads a file and reports missing ones") {
  CHECK_THROWS_AS(load_codebook("/nonexistent/codebook.txt"), CodebookError);
  const char* path = "cb_roundtrip_test.txt";
  {
    std::ofstream out(path);
    out << format_codebook(default_codebook_set());
  }
  CodebookSet set = load_codebook(path);
  CHECK(set.user_count() == 6);
  std::remove(path);
}

TEST_CASE("layered and spread sets") {
  CodebookSet twelve = layered_codebook_set(2);
  CHECK(twelve.user_count() == 12);
  FactorGraph g = twelve.factor_graph();
  CHECK(g.col_degree == 6);
  CHECK(validate_factor_graph(g).ok);
  // the second layer is rotated, not identical
  CHECK(twelve.users[6].words[0] != twelve.users[0].words[0]);
  CHECK(twelve.users[6].support == twelve.users[0].support);

  CodebookSet pd = spread_codebook_set(12, 4);
  CHECK(pd.user_count() == 12);
  for (const Codebook& cb : pd.users) {
    CHECK(cb.spreading_degree() == 4);
    CHECK(cb.average_energy() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
