#include <doctest.h>

#include "channel.hpp"

using namespace hdnoma;

TEST_CASE("path loss formula") {
  CHECK(path_loss_db(1.0) == doctest::Approx(145.4).epsilon(1e-12));
  CHECK(path_loss_db(0.3) == doctest::Approx(125.79).epsilon(1e-4));
  CHECK(path_loss_db(0.8) == doctest::Approx(141.77).epsilon(1e-4));
  CHECK_THROWS_AS(path_loss_db(0.0), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(-1.0), std::domain_error);
}

TEST_CASE("noise variance") {
  // 1 MHz over 4 subcarriers: -150.02 dBW, about 9.95e-16 W
  double v = noise_variance_w(1e6, 4);
  CHECK(v == doctest::Approx(9.95e-16).epsilon(0.01));
  // bandwidth equal to the subcarrier count: the log term vanishes
  CHECK(noise_variance_w(4.0, 4) == doctest::Approx(db_to_lin(-204.0)).epsilon(1e-12));
  // doubling bandwidth doubles the linear variance
  CHECK(noise_variance_w(2e6, 4) == doctest::Approx(2.0 * v).epsilon(1e-12));
  CHECK_THROWS_AS(noise_variance_w(0.0, 4), std::domain_error);
  CHECK_THROWS_AS(noise_variance_w(1e6, 0), std::domain_error);
}

TEST_CASE("channel draws are seed-deterministic") {
  LinkBudget b;
  Rng r1(42), r2(42);
  ChannelState a = draw_channel(r1, b, 6, 6, 4);
  ChannelState c = draw_channel(r2, b, 6, 6, 4);
  CHECK(a.strong == c.strong);
  CHECK(a.weak == c.weak);
  CHECK(a.noise_variance_w == c.noise_variance_w);
}

TEST_CASE("channel moments match the path loss") {
  LinkBudget b;
  Rng rng(7);
  const int draws = 100000;
  double acc_s = 0.0, acc_w = 0.0;
  for (int t = 0; t < draws; ++t) {
    ChannelState st = draw_channel(rng, b, 1, 1, 1);
    acc_s += std::norm(st.strong[0][0]);
    acc_w += std::norm(st.weak[0][0]);
  }
  double mean_s = acc_s / draws;
  double mean_w = acc_w / draws;
  CHECK(mean_s == doctest::Approx(db_to_lin(-path_loss_db(0.3))).epsilon(0.02));
  CHECK(mean_w == doctest::Approx(db_to_lin(-path_loss_db(0.8))).epsilon(0.02));
  // group gain ratio ~ 10^((141.77-125.79)/10) ~ 39.6
  CHECK(mean_s / mean_w == doctest::Approx(39.6).epsilon(0.05));
}

TEST_CASE("received synthesis basics") {
  ChannelState st;
  st.strong = {CVec{1.0, 1.0, 1.0, 1.0}};
  st.weak = {};
  st.noise_variance_w = 1e-12;

  SUBCASE("all-zero codewords give zero output") {
    std::vector<CVec> x = {CVec(4, cplx(0, 0))};
    CVec y = synthesize_received(x, {}, st, 4.0, 0.0, nullptr);
    for (const cplx& v : y) CHECK(std::abs(v) == 0.0);
  }
  SUBCASE("sqrt-power scaling") {
    std::vector<CVec> x = {CVec{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0.5, 0.5)}};
    CVec y = synthesize_received(x, {}, st, 4.0, 0.0, nullptr);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(y[k] - 2.0 * x[0][k]) < 1e-15);
  }
  SUBCASE("dimension mismatch throws") {
    std::vector<CVec> x = {CVec(3, cplx(1, 0))};
    CHECK_THROWS_AS(synthesize_received(x, {}, st, 1.0, 0.0, nullptr),
                    std::invalid_argument);
    std::vector<CVec> two(2, CVec(4));
    CHECK_THROWS_AS(synthesize_received(two, {}, st, 1.0, 0.0, nullptr),
                    std::invalid_argument);
  }
}

TEST_CASE("synthesis equals a straight-line reference on a full instance") {
  LinkBudget b;
  Rng rng(11);
  ChannelState st = draw_channel(rng, b, 6, 6, 4);
  std::vector<CVec> xs(6, CVec(4)), xw(6, CVec(4));
  for (auto& v : xs)
    for (auto& c : v) c = rng.cgaussian();
  for (auto& v : xw)
    for (auto& c : v) c = rng.cgaussian();
  const double ps = 2.5, pw = 0.7;
  CVec y = synthesize_received(xs, xw, st, ps, pw, nullptr);

  // independent re-evaluation, one term at a time
  CVec ref(4, cplx(0, 0));
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 6; ++i) ref[k] += std::sqrt(ps) * st.strong[i][k] * xs[i][k];
    for (int j = 0; j < 6; ++j) ref[k] += std::sqrt(pw) * st.weak[j][k] * xw[j][k];
  }
  for (int k = 0; k < 4; ++k) CHECK(std::abs(y[k] - ref[k]) < 1e-12 * std::abs(ref[k]) + 1e-30);
}

TEST_CASE("synthesis is linear when the noise draw is shared") {
  LinkBudget b;
  Rng rng(13);
  ChannelState st = draw_channel(rng, b, 2, 2, 4);
  auto rand_words = [&](Rng& r) {
    std::vector<CVec> v(2, CVec(4));
    for (auto& w : v)
      for (auto& c : w) c = r.cgaussian();
    return v;
  };
  Rng data(5);
  std::vector<CVec> a = rand_words(data), bw = rand_words(data);
  std::vector<CVec> zero(2, CVec(4, cplx(0, 0)));
  std::vector<CVec> sum(2, CVec(4));
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 4; ++k) sum[j][k] = a[j][k] + bw[j][k];

  Rng n1(99), n2(99), n3(99), n4(99);
  CVec ya = synthesize_received(a, zero, st, 1.0, 1.0, &n1);
  CVec yb = synthesize_received(bw, zero, st, 1.0, 1.0, &n2);
  CVec y0 = synthesize_received(zero, zero, st, 1.0, 1.0, &n3);
  CVec ysum = synthesize_received(sum, zero, st, 1.0, 1.0, &n4);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs((ya[k] + yb[k] - y0[k]) - ysum[k]) < 1e-12);
}
