#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "splitset/confidence_sets.hpp"
#include "splitset/error.hpp"
#include "splitset/simulation.hpp"

using namespace splitset;
using doctest::Approx;

namespace {

QuantileTable flat_table(LimitDistribution dist, double value) {
  QuantileTable t;
  t.dist = dist;
  t.cdf_levels = {0.001, 0.999};
  t.quantiles = {value, value};
  return t;
}

QuantileTable chernoff_with(double p975) {
  QuantileTable t;
  t.dist = LimitDistribution::ChernoffArgmax;
  t.cdf_levels = {0.025, 0.5, 0.975};
  t.quantiles = {-p975, 0.0, p975};
  return t;
}

const NuisanceEstimates kTruth{1.0, 0.5, 3.75, 0.25};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("accepted components and the longest one") {
  const std::vector<double> grid{1, 2, 3, 4, 5, 6};
  const auto comps = accepted_components(grid, {true, true, false, true, true, false});
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == Interval{1, 2});
  CHECK(comps[1] == Interval{4, 5});
  CHECK(longest_of(comps) == Interval{1, 2});
  CHECK(longest_of(accepted_components(grid, {false, false, false, true, true, true})) ==
        Interval{4, 6});
  CHECK(code_of([&] { accepted_components(grid, std::vector<bool>(6, false)); }) ==
        ErrorCode::EmptySet);
}

TEST_CASE("Wald half-width at the true constants") {
  const auto lp = limit_params(kTruth, 0.092, 0.908);
  const double delta = wald_half_width(lp, 1000, 0.05, chernoff_with(0.998));
  CHECK(delta == Approx(0.0487).epsilon(0.005));
  CHECK(2.0 * delta == Approx(0.0974).epsilon(0.005));
}

TEST_CASE("Wald intervals collapse with a zero quantile") {
  const auto lp = limit_params(kTruth, 0.1, 0.9);
  const StumpFit fit{0.5, 0.1, 0.9, 1.0, 10};
  const auto w = wald_cis(fit, lp, 500, 0.05, flat_table(LimitDistribution::ChernoffArgmax, 0.0));
  CHECK(w.split == Interval{0.5, 0.5});
  CHECK(w.beta_l == Interval{0.1, 0.1});
  CHECK(w.beta_u == Interval{0.9, 0.9});
}

TEST_CASE("Wald refuses a flat regression") {
  const auto lp = limit_params({1.0, 0.5, 0.0, 0.25}, 0.1, 0.9);
  const StumpFit fit{0.5, 0.1, 0.9, 1.0, 10};
  CHECK(code_of([&] {
          wald_set(fit, lp, 100, 0.05, embedded_table(LimitDistribution::ChernoffArgmax));
        }) == ErrorCode::Unstable);
}

TEST_CASE("set-valued procedures always accept the estimate") {
  const auto& p = embedded_table(LimitDistribution::ChernoffArgmax);
  const auto& q = embedded_table(LimitDistribution::MaxQ1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = generate_sample(60 + seed, ErrorModel::Homoscedastic, seed);
    const StumpProblem problem(s);
    const auto fit = problem.fit();
    const auto lp = limit_params(kTruth, fit.beta_l, fit.beta_u);
    CHECK(rss1_set(problem, fit, lp, 0.05, q).longest_component.contains(fit.d_hat));
    CHECK(rss2_set(problem, fit, lp, 0.05, q).longest_component.contains(fit.d_hat));
    const auto piv = pivot_set(problem, fit, lp, 0.05, p);
    bool in_some = false;
    for (const auto& c : piv.accepted) in_some = in_some || c.contains(fit.d_hat);
    CHECK(in_some);
  }
}

TEST_CASE("huge thresholds accept the whole grid") {
  const auto s = generate_sample(80, ErrorModel::Homoscedastic, 3);
  const StumpProblem problem(s);
  const auto fit = problem.fit();
  const auto lp = limit_params(kTruth, fit.beta_l, fit.beta_u);
  const auto& grid = problem.candidates().values;
  const Interval all{grid.front(), grid.back()};
  const auto big_q = flat_table(LimitDistribution::MaxQ1, 1e9);
  CHECK(rss1_set(problem, fit, lp, 0.05, big_q).longest_component == all);
  CHECK(rss2_set(problem, fit, lp, 0.05, big_q).longest_component == all);
  const auto big_p = flat_table(LimitDistribution::ChernoffArgmax, 1e9);
  CHECK(pivot_set(problem, fit, lp, 0.05, big_p).longest_component == all);
}

TEST_CASE("RSS and pivot sets match brute-force acceptance") {
  const auto& p = embedded_table(LimitDistribution::ChernoffArgmax);
  const auto& q = embedded_table(LimitDistribution::MaxQ1);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto s = oracle::random_sample(seed + 5000, 40);
    const StumpProblem problem(s);
    const auto fit = problem.fit();
    const auto lp = limit_params(kTruth, fit.beta_l, fit.beta_u);
    const auto grid = oracle::candidates(s);
    const auto o = oracle::fit(s);

    const auto r1 = rss1_set(problem, fit, lp, 0.05, q);
    const auto r2 = rss2_set(problem, fit, lp, 0.05, q);
    const auto pv = pivot_set(problem, fit, lp, 0.05, p);
    const double tau1 = r1.diagnostics.at("threshold");
    const double tau2 = r2.diagnostics.at("threshold");
    const double radius = pv.diagnostics.at("radius");
    CHECK(tau1 == Approx(2.0 * std::cbrt(40.0) * std::abs(o.bl - o.bu) * lp.a *
                         std::cbrt(lp.a / lp.b) * maxq1_quantile(0.05, q)));
    CHECK(tau2 == Approx(tau1 * std::cbrt(lp.b / lp.b0)));

    auto accepted = [](const ConfidenceSet& set, double d) {
      for (const auto& c : set.accepted) {
        if (c.contains(d)) return true;
      }
      return false;
    };
    for (double d : grid) {
      const double s1 = oracle::profiled_rss(s, d) - o.rss;
      if (std::abs(s1 - tau1) > 1e-9) CHECK(accepted(r1, d) == (s1 <= tau1));
      const double s2 = oracle::rss2(s, d);
      if (std::abs(s2 - tau2) > 1e-9) CHECK(accepted(r2, d) == (s2 <= tau2));
      const auto [bl, bu] = oracle::side_means(s, d);
      const double dev = std::abs(oracle::profiled_dhat(s, bl, bu) - d);
      if (std::abs(dev - radius) > 1e-12) CHECK(accepted(pv, d) == (dev <= radius));
    }
  }
}

TEST_CASE("RSS calibrations refuse vanishing curvature") {
  const auto s = generate_sample(50, ErrorModel::Homoscedastic, 4);
  const StumpProblem problem(s);
  const auto fit = problem.fit();
  const auto flat = limit_params({1.0, 0.5, 0.0, 0.25}, fit.beta_l, fit.beta_u);
  const auto& q = embedded_table(LimitDistribution::MaxQ1);
  CHECK(code_of([&] { rss1_set(problem, fit, flat, 0.05, q); }) == ErrorCode::Unstable);
  CHECK(code_of([&] { rss2_set(problem, fit, flat, 0.05, q); }) == ErrorCode::Unstable);
}

TEST_CASE("block size and subsample indices") {
  CHECK(block_size(500, 0.6) == static_cast<std::size_t>(std::lround(std::pow(500.0, 0.6))));
  const auto idx = subsample_indices(9, 100, 30, 4);
  REQUIRE(idx.size() == 30);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 30);
  CHECK(idx.back() < 100);
  CHECK(idx == subsample_indices(9, 100, 30, 4));
  CHECK(idx != subsample_indices(9, 100, 30, 5));
}

TEST_CASE("subsampling on noiseless step data") {
  std::vector<double> x, y;
  for (int i = 0; i < 100; ++i) {
    x.push_back(i % 4 + 1);
    y.push_back(i % 4 + 1 <= 2 ? 0.0 : 1.0);
  }
  const Sample s(x, y);
  const auto set = subsample_ci(s, stump_estimator(), {0.6, 200, 3}, 0.05);
  CHECK(set.longest_component == Interval{2, 2});
  CHECK(set.point_estimate == 2);
}

TEST_CASE("subsampling is deterministic given the seed") {
  const auto s = generate_sample(300, ErrorModel::Homoscedastic, 12);
  const SubsampleSpec spec{0.6, 300, 7};
  const auto a = subsample_ci(s, stump_estimator(), spec, 0.05);
  const auto b = subsample_ci(s, stump_estimator(), spec, 0.05);
  CHECK(a.longest_component == b.longest_component);
  CHECK(a.diagnostics == b.diagnostics);
  CHECK(a.diagnostics.at("block_size") == static_cast<double>(block_size(300, 0.6)));
  CHECK(a.longest_component.contains(a.point_estimate));
}

TEST_CASE("subsampling block size limits") {
  const auto s = generate_sample(50, ErrorModel::Homoscedastic, 13);
  CHECK(code_of([&] { subsample_ci(s, stump_estimator(), {0.1, 100, 1}, 0.05); }) ==
        ErrorCode::BlockTooSmall);
  CHECK(code_of([&] { subsample_ci(s, stump_estimator(), {0.9999, 100, 1}, 0.05); }) ==
        ErrorCode::BlockTooLarge);
  CHECK(code_of([&] { subsample_ci(s, stump_estimator(), {0.6, 10, 1}, 0.05); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("method names") {
  for (Method m : {Method::Wald, Method::Rss1, Method::Rss2, Method::Pivot, Method::Subsample}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("bootstrap"), Error);
}
