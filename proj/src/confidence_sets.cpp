#include "splitset/confidence_sets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "splitset/error.hpp"
#include "splitset/parallel.hpp"

namespace splitset {
namespace {

constexpr std::uint64_t kSubsampleStream = 0x7375627361ULL;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

ConfidenceSet assemble(Method method, double alpha, double point_estimate,
                       std::span<const double> grid, const std::vector<bool>& accepted) {
  ConfidenceSet set;
  set.method = method;
  set.level = 1.0 - alpha;
  set.point_estimate = point_estimate;
  set.accepted = accepted_components(grid, accepted);
  set.longest_component = longest_of(set.accepted);
  return set;
}

void add_limit_diagnostics(ConfidenceSet& set, const LimitParams& lp) {
  set.diagnostics["a"] = lp.a;
  set.diagnostics["b"] = lp.b;
  set.diagnostics["b0"] = lp.b0;
}

}  // namespace

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::Wald: return "wald";
    case Method::Rss1: return "rss1";
    case Method::Rss2: return "rss2";
    case Method::Pivot: return "pivot";
    case Method::Subsample: return "subsample";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Wald, Method::Rss1, Method::Rss2, Method::Pivot, Method::Subsample}) {
    if (method_name(m) == name) return m;
  }
  fail(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

Interval ConfidenceSet::hull() const {
  if (accepted.empty()) return longest_component;
  return {accepted.front().lo, accepted.back().hi};
}

std::vector<Interval> accepted_components(std::span<const double> grid,
                                          const std::vector<bool>& accepted) {
  if (grid.size() != accepted.size()) {
    fail(ErrorCode::InvalidArgument, "grid and acceptance mask differ in length");
  }
  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < grid.size()) {
    if (!accepted[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && accepted[j + 1]) ++j;
    out.push_back({grid[i], grid[j]});
    i = j + 1;
  }
  if (out.empty()) fail(ErrorCode::EmptySet, "no candidate split point was accepted");
  return out;
}

Interval longest_of(const std::vector<Interval>& components) {
  if (components.empty()) fail(ErrorCode::EmptySet, "no accepted component");
  Interval best = components.front();
  for (const auto& c : components) {
    if (c.length() > best.length()) best = c;
  }
  return best;
}

double wald_half_width(const LimitParams& lp, std::size_t n, double alpha,
                       const QuantileTable& p_table) {
  require_alpha(alpha);
  if (!(lp.b > 0.0)) {
    fail(ErrorCode::Unstable,
         "b = " + std::to_string(lp.b) +
             " <= 0: the regression is too flat at the split for Wald-type inference");
  }
  const double p = chernoff_quantile(alpha / 2.0, p_table);
  return std::cbrt(1.0 / static_cast<double>(n)) * std::pow(lp.a / lp.b, 2.0 / 3.0) * p;
}

WaldIntervals wald_cis(const StumpFit& fit, const LimitParams& lp, std::size_t n, double alpha,
                       const QuantileTable& p_table) {
  const double delta = wald_half_width(lp, n, alpha, p_table);
  WaldIntervals w;
  w.delta = delta;
  const double dl = std::abs(lp.c1) * delta;
  const double du = std::abs(lp.c2) * delta;
  w.beta_l = {fit.beta_l - dl, fit.beta_l + dl};
  w.beta_u = {fit.beta_u - du, fit.beta_u + du};
  w.split = {fit.d_hat - delta, fit.d_hat + delta};
  return w;
}

ConfidenceSet wald_set(const StumpFit& fit, const LimitParams& lp, std::size_t n, double alpha,
                       const QuantileTable& p_table) {
  const auto w = wald_cis(fit, lp, n, alpha, p_table);
  ConfidenceSet set;
  set.method = Method::Wald;
  set.level = 1.0 - alpha;
  set.point_estimate = fit.d_hat;
  set.accepted = {w.split};
  set.longest_component = w.split;
  add_limit_diagnostics(set, lp);
  set.diagnostics["delta"] = w.delta;
  set.diagnostics["quantile"] = chernoff_quantile(alpha / 2.0, p_table);
  return set;
}

double rss_threshold(std::size_t n, double jump, double a, double curvature, double alpha,
                     const QuantileTable& q_table) {
  require_alpha(alpha);
  const double q = maxq1_quantile(alpha, q_table);
  return 2.0 * std::cbrt(static_cast<double>(n)) * std::abs(jump) * a *
         std::cbrt(a / curvature) * q;
}

double pivot_radius(const LimitParams& lp, std::size_t n, double alpha,
                    const QuantileTable& p_table) {
  require_alpha(alpha);
  if (!(lp.b0 > 0.0)) fail(ErrorCode::Unstable, "b0 = 0: the regression is flat at the split");
  const double p = chernoff_quantile(alpha / 2.0, p_table);
  return std::cbrt(1.0 / static_cast<double>(n)) * std::pow(lp.a / lp.b0, 2.0 / 3.0) * p;
}

ConfidenceSet rss1_set(const StumpProblem& problem, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table) {
  if (!(lp.b > 0.0)) {
    fail(ErrorCode::Unstable,
         "b = " + std::to_string(lp.b) +
             " <= 0: the RSS1 calibration is unstable when the regression is flat at the split");
  }
  const double tau =
      rss_threshold(problem.size(), fit.beta_l - fit.beta_u, lp.a, lp.b, alpha, q_table);
  const auto& grid = problem.candidates();
  std::vector<bool> accept(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    accept[i] = problem.rss1(grid.values[i], fit) <= tau;
  }
  auto set = assemble(Method::Rss1, alpha, fit.d_hat, grid.values, accept);
  add_limit_diagnostics(set, lp);
  set.diagnostics["threshold"] = tau;
  set.diagnostics["quantile"] = maxq1_quantile(alpha, q_table);
  return set;
}

ConfidenceSet rss2_set(const StumpProblem& problem, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table) {
  if (!(lp.b0 > 0.0)) {
    fail(ErrorCode::Unstable, "b0 = 0: the RSS2 calibration needs a nonzero slope at the split");
  }
  const double tau =
      rss_threshold(problem.size(), fit.beta_l - fit.beta_u, lp.a, lp.b0, alpha, q_table);
  const auto& grid = problem.candidates();
  std::vector<bool> accept(grid.size());
  std::size_t degenerate = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      accept[i] = problem.rss2(grid.values[i]) <= tau;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateLevels) throw;
      accept[i] = false;
      ++degenerate;
    }
  }
  auto set = assemble(Method::Rss2, alpha, fit.d_hat, grid.values, accept);
  add_limit_diagnostics(set, lp);
  set.diagnostics["threshold"] = tau;
  set.diagnostics["quantile"] = maxq1_quantile(alpha, q_table);
  set.diagnostics["degenerate_candidates"] = static_cast<double>(degenerate);
  return set;
}

ConfidenceSet pivot_set(const StumpProblem& problem, const StumpFit& fit, const LimitParams& lp,
                        double alpha, const QuantileTable& p_table) {
  if (fit.beta_l == fit.beta_u) {
    fail(ErrorCode::DegenerateLevels, "fitted levels coincide");
  }
  const double radius = pivot_radius(lp, problem.size(), alpha, p_table);
  const auto& grid = problem.candidates();
  std::vector<bool> accept(grid.size());
  std::size_t degenerate = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      accept[i] = std::abs(problem.profiled_dhat_at_candidate(i) - grid.values[i]) <= radius;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateLevels) throw;
      accept[i] = false;
      ++degenerate;
    }
  }
  auto set = assemble(Method::Pivot, alpha, fit.d_hat, grid.values, accept);
  add_limit_diagnostics(set, lp);
  set.diagnostics["radius"] = radius;
  set.diagnostics["quantile"] = chernoff_quantile(alpha / 2.0, p_table);
  set.diagnostics["degenerate_candidates"] = static_cast<double>(degenerate);
  return set;
}

ConfidenceSet rss1_set(const Sample& sample, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table) {
  return rss1_set(StumpProblem(sample), fit, lp, alpha, q_table);
}

ConfidenceSet rss2_set(const Sample& sample, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table) {
  return rss2_set(StumpProblem(sample), fit, lp, alpha, q_table);
}

ConfidenceSet pivot_set(const Sample& sample, const StumpFit& fit, const LimitParams& lp,
                        double alpha, const QuantileTable& p_table) {
  return pivot_set(StumpProblem(sample), fit, lp, alpha, p_table);
}

SplitEstimator stump_estimator(std::size_t min_side) {
  return [min_side](const Sample& s) { return fit_stump(s, min_side).d_hat; };
}

std::size_t block_size(std::size_t n, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    fail(ErrorCode::InvalidArgument, "block exponent gamma must lie in (0, 1)");
  }
  return static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), gamma)));
}

std::vector<std::size_t> subsample_indices(std::uint64_t seed, std::size_t n, std::size_t m,
                                           std::size_t b) {
  if (m > n) fail(ErrorCode::BlockTooLarge, "block size exceeds the sample size");
  // Floyd's sampling without replacement.
  Rng rng = make_rng(seed, kSubsampleStream, b);
  std::vector<char> chosen(n, 0);
  for (std::size_t j = n - m; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    if (chosen[t]) {
      chosen[j] = 1;
    } else {
      chosen[t] = 1;
    }
  }
  std::vector<std::size_t> out;
  out.reserve(m);
  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i]) out.push_back(i);
  }
  return out;
}

ConfidenceSet subsample_ci(const Sample& sample, const SplitEstimator& fit_fn,
                           const SubsampleSpec& spec, double alpha, std::size_t min_side) {
  require_alpha(alpha);
  if (spec.n_subsamples < 100) {
    fail(ErrorCode::InvalidArgument, "at least 100 subsamples are required");
  }
  const std::size_t n = sample.size();
  const std::size_t m = block_size(n, spec.gamma);
  if (m < 2 * min_side) {
    fail(ErrorCode::BlockTooSmall, "block size " + std::to_string(m) + " is below 2 * min_side");
  }
  if (m >= n) {
    fail(ErrorCode::BlockTooLarge,
         "block size " + std::to_string(m) + " must be smaller than n = " + std::to_string(n));
  }

  const Sample sorted = sample.sorted();
  const double d_hat = fit_fn(sorted);
  const double m_cbrt = std::cbrt(static_cast<double>(m));
  const auto xs = sorted.x();
  const auto ys = sorted.y();

  std::vector<double> stats(spec.n_subsamples);
  parallel_for(spec.n_subsamples, [&](std::size_t b) {
    const auto idx = subsample_indices(spec.seed, n, m, b);
    std::vector<double> sx(m);
    std::vector<double> sy(m);
    for (std::size_t i = 0; i < m; ++i) {
      sx[i] = xs[idx[i]];
      sy[i] = ys[idx[i]];
    }
    stats[b] = m_cbrt * (fit_fn(Sample(std::move(sx), std::move(sy))) - d_hat);
  });
  std::sort(stats.begin(), stats.end());
  const double t_lo = empirical_quantile(stats, alpha / 2.0);
  const double t_hi = empirical_quantile(stats, 1.0 - alpha / 2.0);
  const double scale = std::cbrt(1.0 / static_cast<double>(n));

  ConfidenceSet set;
  set.method = Method::Subsample;
  set.level = 1.0 - alpha;
  set.point_estimate = d_hat;
  set.longest_component = {d_hat - scale * t_hi, d_hat - scale * t_lo};
  set.accepted = {set.longest_component};
  set.diagnostics["block_size"] = static_cast<double>(m);
  set.diagnostics["gamma"] = spec.gamma;
  set.diagnostics["subsamples"] = static_cast<double>(spec.n_subsamples);
  set.diagnostics["t_lo"] = t_lo;
  set.diagnostics["t_hi"] = t_hi;
  return set;
}

}  // namespace splitset
