#include "doctest.h"
#include "oracles.hpp"
#include "splitset/error.hpp"
#include "splitset/stump.hpp"

using namespace splitset;
using doctest::Approx;

namespace {

Sample step4() { return Sample({1, 2, 3, 4}, {0, 0, 1, 1}); }

}  // namespace

TEST_CASE("sample validation") {
  CHECK_THROWS_AS(Sample({1, 2}, {1}), Error);
  CHECK_THROWS_AS(Sample({1}, {1}), Error);
  CHECK_THROWS_AS(Sample({1, std::nan("")}, {1, 2}), Error);
  try {
    Sample({1}, {1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSample);
  }
}

TEST_CASE("fit_stump on a perfect step") {
  const auto f = fit_stump(step4());
  CHECK(f.d_hat == 2);
  CHECK(f.beta_l == 0);
  CHECK(f.beta_u == 1);
  CHECK(f.rss == Approx(0.0));
  CHECK(f.n_left == 2);
}

TEST_CASE("fit_stump constant response picks the smallest split") {
  const auto f = fit_stump(Sample({1, 2, 3, 4}, {5, 5, 5, 5}));
  CHECK(f.d_hat == 1);
  CHECK(f.beta_l == Approx(5.0));
  CHECK(f.beta_u == Approx(5.0));
  CHECK(f.rss == Approx(0.0));
}

TEST_CASE("fit_stump degenerate inputs") {
  CHECK_THROWS_AS(fit_stump(Sample({1, 1, 1}, {1, 2, 3})), Error);
  try {
    fit_stump(Sample({1, 2, 3}, {1, 2, 3}), 2);
    FAIL("expected DegenerateSample");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSample);
  }
}

TEST_CASE("fit_stump matches exhaustive scan on random samples") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 49;
    const auto s = oracle::random_sample(seed, n, seed % 3 == 0);
    const std::size_t distinct = oracle::candidates(s).size();
    if (distinct == 0) continue;
    const auto o = oracle::fit(s);
    const auto f = fit_stump(s);
    INFO("seed " << seed);
    CHECK(f.d_hat == o.d);
    CHECK(f.beta_l == Approx(o.bl).epsilon(1e-10));
    CHECK(f.beta_u == Approx(o.bu).epsilon(1e-10));
    CHECK(f.rss == Approx(o.rss).epsilon(1e-9).scale(1.0));
    // optimality over every candidate
    for (double d : oracle::candidates(s)) CHECK(f.rss <= oracle::profiled_rss(s, d) + 1e-9);
  }
}

TEST_CASE("fit_stump respects min_side") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = oracle::random_sample(seed + 1000, 30);
    const auto o = oracle::fit(s, 5);
    const auto f = fit_stump(s, 5);
    CHECK(f.d_hat == o.d);
    CHECK(f.n_left >= 5);
    CHECK(s.size() - f.n_left >= 5);
  }
}

TEST_CASE("profile_levels") {
  const auto a = profile_levels(step4(), 2);
  CHECK(a.beta_l == 0);
  CHECK(a.beta_u == 1);
  const auto b = profile_levels(step4(), 3);
  CHECK(b.beta_l == Approx(1.0 / 3.0));
  CHECK(b.beta_u == Approx(1.0));
  try {
    profile_levels(step4(), 4);
    FAIL("expected EmptySide");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySide);
  }
  CHECK_THROWS_AS(profile_levels(step4(), 0.5), Error);

  const auto s = oracle::random_sample(7, 40);
  const auto f = fit_stump(s);
  const auto p = profile_levels(s, f.d_hat);
  CHECK(p.beta_l == Approx(f.beta_l));
  CHECK(p.beta_u == Approx(f.beta_u));
}

TEST_CASE("rss1_stat") {
  const auto f = fit_stump(step4());
  CHECK(rss1_stat(step4(), f.d_hat, f) == Approx(0.0));
  CHECK(rss1_stat(step4(), 3, f) == Approx(2.0 / 3.0));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = oracle::random_sample(seed + 50, 3 + seed % 40);
    const auto fit = fit_stump(s);
    for (double d : oracle::candidates(s)) {
      const double expected = oracle::profiled_rss(s, d) - oracle::fit(s).rss;
      const double got = rss1_stat(s, d, fit);
      CHECK(got >= 0.0);
      CHECK(got == Approx(expected).epsilon(1e-9).scale(1.0));
    }
    CHECK(rss1_stat(s, fit.d_hat, fit) == 0.0);
  }
}

TEST_CASE("profiled_dhat") {
  CHECK(profiled_dhat(step4(), 0, 1) == 2);
  try {
    profiled_dhat(step4(), 0.5, 0.5);
    FAIL("expected DegenerateLevels");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateLevels);
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto s = oracle::random_sample(seed + 300, 3 + seed % 45);
    const auto f = fit_stump(s);
    CHECK(profiled_dhat(s, f.beta_l, f.beta_u) == f.d_hat);
    const double bl = u(rng);
    const double bu = u(rng);
    CHECK(profiled_dhat(s, bl, bu) == oracle::profiled_dhat(s, bl, bu));
  }
}

TEST_CASE("rss2_stat") {
  const auto f = fit_stump(step4());
  CHECK(rss2_stat(step4(), f.d_hat) == Approx(0.0));
  // levels (1/3, 1): criterion(3) = 6/9, criterion(2) = 2/9
  CHECK(rss2_stat(step4(), 3) == Approx(oracle::rss2(step4(), 3)));
  CHECK(rss2_stat(step4(), 3) == Approx(4.0 / 9.0));
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto s = oracle::random_sample(seed + 600, 4 + seed % 45);
    const auto fit = fit_stump(s);
    CHECK(rss2_stat(s, fit.d_hat) == Approx(0.0).scale(1.0));
    for (double d : oracle::candidates(s)) {
      const auto [bl, bu] = oracle::side_means(s, d);
      if (bl == bu) continue;
      const double got = rss2_stat(s, d);
      CHECK(got >= 0.0);
      CHECK(got == Approx(oracle::rss2(s, d)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("rss0_stat") {
  const auto f = fit_stump(step4());
  CHECK(rss0_stat(step4(), f.beta_l, f.beta_u, f.d_hat, f) == Approx(0.0));
  CHECK(rss0_stat(step4(), 0, 1, 3, f) == Approx(1.0));
  const auto s = oracle::random_sample(99, 33);
  const auto fs = fit_stump(s);
  for (double d : {0.1, 0.35, 0.7}) {
    CHECK(rss0_stat(s, 0.2, 0.9, d, fs) ==
          Approx(oracle::criterion(s, 0.2, 0.9, d) - oracle::fit(s).rss).epsilon(1e-9));
  }
}

TEST_CASE("equivariance") {
  const auto s = oracle::random_sample(11, 40);
  const auto f = fit_stump(s);
  std::vector<double> xs(s.x().begin(), s.x().end());
  std::vector<double> ys(s.y().begin(), s.y().end());

  // shifting x by a dyadic constant keeps the arithmetic exact
  std::vector<double> xs_shift = xs;
  for (auto& v : xs_shift) v += 4.0;
  const auto fx = fit_stump(Sample(xs_shift, ys));
  CHECK(fx.d_hat == f.d_hat + 4.0);
  CHECK(fx.beta_l == Approx(f.beta_l));
  CHECK(fx.beta_u == Approx(f.beta_u));

  std::vector<double> ys_scaled = ys;
  for (auto& v : ys_scaled) v *= 3.0;
  const Sample scaled(xs, ys_scaled);
  const auto fs = fit_stump(scaled);
  CHECK(fs.d_hat == f.d_hat);
  CHECK(fs.beta_l == Approx(3.0 * f.beta_l));
  CHECK(fs.beta_u == Approx(3.0 * f.beta_u));
  for (double d : oracle::candidates(s)) {
    CHECK(rss1_stat(scaled, d, fs) == Approx(9.0 * rss1_stat(s, d, f)).scale(1.0));
    CHECK(rss2_stat(scaled, d) == Approx(9.0 * rss2_stat(s, d)).scale(1.0));
  }

  std::vector<double> ys_shift = ys;
  for (auto& v : ys_shift) v += 10.0;
  const auto fy = fit_stump(Sample(xs, ys_shift));
  CHECK(fy.d_hat == f.d_hat);
  CHECK(fy.beta_l == Approx(f.beta_l + 10.0));
  CHECK(fy.beta_u == Approx(f.beta_u + 10.0));
}

TEST_CASE("duplicate x values stay together on the left") {
  const Sample s({1, 1, 2, 2, 3}, {0, 0, 1, 1, 1});
  const StumpProblem p(s);
  CHECK(p.candidates().values == std::vector<double>{1, 2});
  CHECK(p.candidates().left_counts == std::vector<std::size_t>{2, 4});
  const auto f = p.fit();
  CHECK(f.d_hat == 1);
  CHECK(f.n_left == 2);
}

TEST_CASE("determinism") {
  const auto s = oracle::random_sample(5, 45);
  const auto a = fit_stump(s);
  const auto b = fit_stump(s);
  CHECK(a.d_hat == b.d_hat);
  CHECK(a.beta_l == b.beta_l);
  CHECK(a.rss == b.rss);
}
