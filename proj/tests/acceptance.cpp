// Acceptance checks. One PASS/FAIL line per criterion; exit status is
// nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "splitset/confidence_sets.hpp"
#include "splitset/limit_process.hpp"
#include "splitset/parametric.hpp"
#include "splitset/simulation.hpp"
#include "splitset/stump.hpp"

using namespace splitset;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, double seconds) {
  std::printf("%s [%d] %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename F>
void criterion(int id, F body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, ok, detail, secs);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

double logistic(double x) { return sigmoid_mean(x); }

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

bool projection_truth(std::string& out) {
  const double bl = 2.0 * oracle::simpson(logistic, 0.0, 0.5);
  const double bu = 2.0 * oracle::simpson(logistic, 0.5, 1.0);
  const auto truth = true_limit_constants(ErrorModel::Homoscedastic);
  out = fmt("projection levels: beta_l=%.5f beta_u=%.5f d0=%.3f", bl, bu, truth.d0);
  return within(bl, 0.092, 0.001) && within(bu, 0.908, 0.001) && truth.d0 == 0.5;
}

bool wald_length(std::string& out) {
  const auto truth = true_limit_constants(ErrorModel::Homoscedastic);
  const auto& p = embedded_table(LimitDistribution::ChernoffArgmax);
  const double len = 2.0 * wald_half_width(truth.limits, 1000, 0.05, p);
  out = fmt("Wald length n=1000: %.4f (a=%.4f b=%.4f p=%.4f), target 0.097 +- 0.004", len,
            truth.limits.a, truth.limits.b, chernoff_quantile(0.025, p));
  return within(len, 0.097, 0.004);
}

bool homoscedastic_table(std::string& out) {
  Scenario s;
  s.n = 500;
  s.reps = 1000;
  s.methods = {Method::Wald, Method::Rss1, Method::Rss2};
  const auto r = run_coverage_experiment(s);
  const double cov_target[] = {0.947, 0.947, 0.948};
  const double len_target[] = {0.123, 0.118, 0.128};
  bool ok = true;
  out = "homoscedastic n=500:";
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& st = r.stats(s.methods[k]);
    const double cov = st.coverage();
    const double len = st.mean_length();
    ok = ok && within(cov, cov_target[k], 0.025) &&
         within(len, len_target[k], 0.10 * len_target[k]) && st.failure_count() == 0;
    out += " " + std::string(method_name(s.methods[k])) +
           fmt(" cov=%.3f len=%.4f", cov, len);
  }
  return ok;
}

bool heteroscedastic_table(std::string& out) {
  Scenario s;
  s.n = 200;
  s.reps = 1000;
  s.error_model = ErrorModel::Heteroscedastic;
  s.methods = {Method::Wald, Method::Rss1, Method::Rss2};
  const auto r = run_coverage_experiment(s);
  const double wald = r.stats(Method::Wald).coverage();
  const double rss2 = r.stats(Method::Rss2).coverage();
  out = fmt("heteroscedastic n=200: wald cov=%.3f rss1 cov=%.3f rss2 cov=%.3f", wald,
            r.stats(Method::Rss1).coverage(), rss2);
  return within(wald, 0.915, 0.025) && wald < rss2;
}

bool subsampling(std::string& out) {
  Scenario s;
  s.n = 500;
  s.reps = 500;
  s.methods = {Method::Subsample};
  const auto r = run_coverage_experiment(s);
  const auto& st = r.stats(Method::Subsample);
  const double cov = st.coverage();
  // The band is the pass rule. The distance from nominal in standard errors
  // is printed because the grid neighbours of the chosen gamma straddle 0.95.
  const double se = std::sqrt(0.95 * 0.05 / static_cast<double>(st.successes));
  out = fmt("subsampling n=500: gamma=%.2f cov=%.3f (%.1f SE from 0.95) len=%.4f, band [0.90, 1.0]",
            r.selected_gamma.value_or(std::nan("")), cov, (cov - 0.95) / se, st.mean_length());
  return st.failure_count() == 0 && cov >= 0.90 && cov <= 1.0;
}

bool oracle_suites(std::string& out) {
  std::size_t checks = 0, bad = 0;
  auto expect = [&](bool ok) {
    ++checks;
    bad += ok ? 0 : 1;
  };
  auto close = [](double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
  };

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 2 + seed % 49;
    const auto s = oracle::random_sample(seed + 1, n, seed % 3 == 0);
    if (oracle::candidates(s).empty()) continue;
    const auto f = fit_stump(s);
    const auto o = oracle::fit(s);
    expect(f.d_hat == o.d && close(f.beta_l, o.bl, 1e-10) && close(f.beta_u, o.bu, 1e-10) &&
           close(f.rss, o.rss, 1e-9));

    for (double d : oracle::candidates(s)) {
      expect(close(rss1_stat(s, d, f), oracle::profiled_rss(s, d) - o.rss, 1e-9));
      const auto [bl, bu] = oracle::side_means(s, d);
      if (bl == bu) continue;
      expect(close(rss2_stat(s, d), oracle::rss2(s, d), 1e-9));
      expect(profiled_dhat(s, bl, bu) == oracle::profiled_dhat(s, bl, bu));
    }

    const auto poly = fit_parametric(s, {0, 0});
    expect(poly.d_hat == f.d_hat && close(poly.rss, f.rss, 1e-10) &&
           close(poly.left_value(poly.d_hat), f.beta_l, 1e-10) &&
           close(poly.right_value(poly.d_hat), f.beta_u, 1e-10));

    // shift/scale equivariance in y, order invariance
    std::vector<double> x(s.x().begin(), s.x().end()), y(s.y().begin(), s.y().end());
    for (double& v : y) v = 3.0 * v - 2.0;
    const auto g = fit_stump(Sample(x, y));
    expect(g.d_hat == f.d_hat && close(g.beta_l, 3.0 * f.beta_l - 2.0, 1e-9) &&
           close(g.rss, 9.0 * f.rss, 1e-9));
    std::reverse(x.begin(), x.end());
    std::vector<double> yr(s.y().begin(), s.y().end());
    std::reverse(yr.begin(), yr.end());
    expect(fit_stump(Sample(x, yr)).d_hat == f.d_hat);

    // containment of the estimate in every inverted set
    if (n >= 10 && f.beta_l != f.beta_u) {
      const StumpProblem problem(s);
      const auto truth = true_limit_constants(ErrorModel::Homoscedastic);
      const auto lp = limit_params(truth.nuisance, f.beta_l, f.beta_u);
      const auto& q = embedded_table(LimitDistribution::MaxQ1);
      const auto& p = embedded_table(LimitDistribution::ChernoffArgmax);
      expect(rss1_set(problem, f, lp, 0.05, q).longest_component.contains(f.d_hat));
      bool in2 = false;
      for (const auto& c : rss2_set(problem, f, lp, 0.05, q).accepted) in2 = in2 || c.contains(f.d_hat);
      expect(in2);
      expect(wald_set(f, lp, n, 0.05, p).longest_component.contains(f.d_hat));
    }
  }
  out = "oracle suites: " + std::to_string(checks - bad) + "/" + std::to_string(checks) +
        " checks agree";
  return bad == 0 && checks > 1000;
}

bool limit_process(std::string& out) {
  const auto& p = embedded_table(LimitDistribution::ChernoffArgmax);
  const double median = p.at_cdf(0.5);

  // a W(t) - t^2 with a = 2 has argmax distributed as 2^(2/3) times the
  // standard one; compare against independent standard draws.
  const std::size_t reps = 20000;
  ProcessSpec base;
  base.half_width = 3.0;
  base.step = 2e-3;
  base.replications = reps;
  base.seed = 101;
  ProcessSpec scaled = base;
  scaled.a = 2.0;
  scaled.half_width = 5.0;
  scaled.seed = 202;
  std::vector<double> x0, x1;
  for (const auto& r : simulate_argmax_max(base)) x0.push_back(r.argmax);
  const double factor = std::pow(2.0, 2.0 / 3.0);
  for (const auto& r : simulate_argmax_max(scaled)) x1.push_back(r.argmax / factor);
  const double ks = ks_statistic(x0, x1);
  const double ks_crit = 1.628 * std::sqrt(2.0 / static_cast<double>(reps));

  // Same paths at step h and h/2.
  ProcessSpec nested;
  nested.step = 5e-4;
  nested.replications = 50000;
  nested.seed = 303;
  const auto draws = simulate_argmax_max_nested(nested);
  auto q975 = [](const std::vector<ArgmaxMax>& v) {
    std::vector<double> a;
    for (const auto& r : v) a.push_back(r.argmax);
    std::sort(a.begin(), a.end());
    return empirical_quantile(a, 0.975);
  };
  const double dq = std::abs(q975(draws.fine) - q975(draws.coarse));

  out = fmt("limit process: median=%.4f KS=%.4f (crit %.4f) h-halving dq=%.2e", median, ks,
            ks_crit, dq);
  return std::abs(median) < 0.01 && ks < ks_crit && dq < 0.005;
}

}  // namespace

int main() {
  criterion(1, projection_truth);
  criterion(2, wald_length);
  criterion(3, homoscedastic_table);
  criterion(4, heteroscedastic_table);
  criterion(5, subsampling);
  criterion(6, oracle_suites);
  criterion(7, limit_process);
  std::printf(
      "EXCLUDED [8] field-data split and intervals: dataset not published; CLI workflow "
      "covered by synthetic CSV tests\n");
  return failures == 0 ? 0 : 1;
}
