#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "splitset/error.hpp"
#include "splitset/limit_process.hpp"
#include "splitset/parallel.hpp"

using namespace splitset;
using doctest::Approx;

namespace {

ProcessSpec quick_spec() {
  ProcessSpec s;
  s.half_width = 3.0;
  s.step = 3e-3;
  s.replications = 10000;
  s.seed = 42;
  return s;
}

std::vector<double> argmaxes(const std::vector<ArgmaxMax>& draws) {
  std::vector<double> v;
  for (const auto& d : draws) v.push_back(d.argmax);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("argmax is centred and the maximum is nonnegative") {
  const auto draws = simulate_argmax_max(quick_spec());
  REQUIRE(draws.size() == 10000);
  double mean = 0.0;
  for (const auto& d : draws) {
    mean += d.argmax;
    CHECK(d.max >= 0.0);
    CHECK(std::abs(d.argmax) <= 3.0);
  }
  mean /= static_cast<double>(draws.size());
  CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("Brownian scaling of the argmax quantile") {
  ProcessSpec base;
  base.half_width = 5.0;
  base.step = 5e-3;
  base.replications = 40000;
  base.seed = 7;
  ProcessSpec scaled = base;
  scaled.a = 2.0;
  scaled.seed = 8;
  const auto q1 = empirical_quantile(argmaxes(simulate_argmax_max(base)), 0.975);
  const auto q2 = empirical_quantile(argmaxes(simulate_argmax_max(scaled)), 0.975);
  CHECK(q2 / q1 == Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(0.02));
}

TEST_CASE("finer grid never lowers the maximum of the same path") {
  auto spec = quick_spec();
  spec.replications = 10000;
  const auto nested = simulate_argmax_max_nested(spec);
  REQUIRE(nested.fine.size() == nested.coarse.size());
  for (std::size_t r = 0; r < nested.fine.size(); ++r) {
    CHECK(nested.fine[r].max >= nested.coarse[r].max);
  }
}

TEST_CASE("simulation is deterministic and independent of the worker count") {
  auto spec = quick_spec();
  const auto a = simulate_argmax_max(spec);
  setenv("SPLITSET_THREADS", "3", 1);
  const auto b = simulate_argmax_max(spec);
  unsetenv("SPLITSET_THREADS");
  REQUIRE(a.size() == b.size());
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].argmax == b[i].argmax && a[i].max == b[i].max;
  }
  CHECK(same);
}

TEST_CASE("process spec validation") {
  auto spec = quick_spec();
  spec.half_width = 1.0;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = quick_spec();
  spec.step = 0.01;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = quick_spec();
  spec.replications = 100;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = quick_spec();
  spec.b = 0.0;
  CHECK_THROWS_AS(validate(spec), Error);
  CHECK_NOTHROW(validate(quick_spec()));
}

TEST_CASE("embedded Chernoff table") {
  const auto& t = embedded_table(LimitDistribution::ChernoffArgmax);
  CHECK(t.provenance.embedded);
  CHECK(t.provenance.replications >= 200000);
  CHECK(std::abs(chernoff_quantile(0.5, t)) < 0.01);
  CHECK(chernoff_quantile(0.025, t) == Approx(0.998).epsilon(0.015));
  CHECK(chernoff_quantile(0.025, t) > chernoff_quantile(0.25, t));
  CHECK(chernoff_quantile(0.25, t) > 0.0);
  CHECK(std::is_sorted(t.quantiles.begin(), t.quantiles.end()));
  // symmetric about zero
  for (std::size_t i = 0; i < t.cdf_levels.size(); ++i) {
    const std::size_t j = t.cdf_levels.size() - 1 - i;
    CHECK(t.quantiles[i] + t.quantiles[j] == Approx(0.0).scale(1.0).epsilon(0.02));
  }
  CHECK_THROWS_AS(chernoff_quantile(0.0001, t), Error);
  CHECK_THROWS_AS(chernoff_quantile(0.05, embedded_table(LimitDistribution::MaxQ1)), Error);
}

TEST_CASE("embedded max table") {
  const auto& t = embedded_table(LimitDistribution::MaxQ1);
  CHECK(maxq1_quantile(0.05, t) > maxq1_quantile(0.25, t));
  CHECK(maxq1_quantile(0.25, t) > 0.0);
  CHECK(t.quantiles.front() >= 0.0);
}

TEST_CASE("max quantile is consistent with the draws it came from") {
  const auto spec = quick_spec();
  const auto [argmax_table, max_table] = simulate_tables(spec, default_cdf_levels());
  const auto draws = simulate_argmax_max(spec);
  const double r = static_cast<double>(draws.size());
  for (double alpha : {0.05, 0.1, 0.25}) {
    const double q = maxq1_quantile(alpha, max_table);
    double exceed = 0.0;
    for (const auto& d : draws) exceed += d.max > q ? 1.0 : 0.0;
    CHECK(std::abs(exceed / r - alpha) <= 2.0 * std::sqrt(alpha / r));
  }
  CHECK(argmax_table.provenance.seed == spec.seed);
  CHECK_FALSE(argmax_table.provenance.embedded);
}

TEST_CASE("doubling the replications barely moves the max quantile") {
  auto spec = quick_spec();
  spec.replications = 20000;
  const auto t1 = simulate_tables(spec, default_cdf_levels()).second;
  spec.replications = 40000;
  spec.seed = 43;
  const auto t2 = simulate_tables(spec, default_cdf_levels()).second;
  CHECK(std::abs(maxq1_quantile(0.05, t1) - maxq1_quantile(0.05, t2)) < 0.03);
}

TEST_CASE("empirical quantile interpolates linearly") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(empirical_quantile(v, 0.0) == 1);
  CHECK(empirical_quantile(v, 1.0) == 5);
  CHECK(empirical_quantile(v, 0.5) == 3);
  CHECK(empirical_quantile(v, 0.125) == Approx(1.5));
  CHECK_THROWS_AS(empirical_quantile(v, 1.5), Error);
}

TEST_CASE("table text round trip") {
  const auto& t = embedded_table(LimitDistribution::MaxQ1);
  const auto text = format_table(t);
  CHECK(text.rfind("# dist=maxq1 source=embedded", 0) == 0);
  const auto back = parse_table(text);
  CHECK(back.dist == t.dist);
  REQUIRE(back.quantiles.size() == t.quantiles.size());
  for (std::size_t i = 0; i < t.quantiles.size(); ++i) {
    CHECK(back.quantiles[i] == t.quantiles[i]);
    CHECK(back.cdf_levels[i] == Approx(t.cdf_levels[i]).epsilon(1e-12));
  }
  CHECK(back.provenance.replications == t.provenance.replications);
  CHECK_THROWS_AS(parse_table("level\tquantile\n0.5\t1\n"), Error);
  CHECK_THROWS_AS(parse_table("# dist=maxq1\nlevel\tquantile\n0.5 1\n"), Error);
}

TEST_CASE("distribution names") {
  CHECK(parse_distribution("chernoff") == LimitDistribution::ChernoffArgmax);
  CHECK(parse_distribution("maxq1") == LimitDistribution::MaxQ1);
  CHECK_THROWS_AS(parse_distribution("normal"), Error);
}
