#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "splitset/limit_process.hpp"
#include "splitset/nuisance.hpp"
#include "splitset/sample.hpp"
#include "splitset/stump.hpp"

namespace splitset {

enum class Method { Wald, Rss1, Rss2, Pivot, Subsample };

std::string_view method_name(Method method) noexcept;
Method parse_method(std::string_view name);

struct ConfidenceSet {
  Method method = Method::Wald;
  double level = 0.95;  // 1 - alpha
  std::vector<Interval> accepted;  // disjoint, sorted
  Interval longest_component;      // longest accepted interval, leftmost on ties
  double point_estimate = 0.0;
  std::map<std::string, double> diagnostics;

  // Span from the first accepted point to the last.
  Interval hull() const;
};

// Maximal runs of consecutive accepted grid points, each reported as
// [first, last]. Throws EmptySet when nothing is accepted.
std::vector<Interval> accepted_components(std::span<const double> grid,
                                          const std::vector<bool>& accepted);
Interval longest_of(const std::vector<Interval>& components);

struct WaldIntervals {
  Interval beta_l;
  Interval beta_u;
  Interval split;
  double delta = 0.0;
};

// n^(-1/3) (a/b)^(2/3) p_{alpha/2}. Throws Unstable when b <= 0.
double wald_half_width(const LimitParams& lp, std::size_t n, double alpha,
                       const QuantileTable& p_table);

WaldIntervals wald_cis(const StumpFit& fit, const LimitParams& lp, std::size_t n, double alpha,
                       const QuantileTable& p_table);
ConfidenceSet wald_set(const StumpFit& fit, const LimitParams& lp, std::size_t n, double alpha,
                       const QuantileTable& p_table);

// 2 n^(1/3) |beta_l - beta_u| a (a/curvature)^(1/3) q_alpha.
double rss_threshold(std::size_t n, double jump, double a, double curvature, double alpha,
                     const QuantileTable& q_table);

// n^(-1/3) (a/b0)^(2/3) p_{alpha/2}.
double pivot_radius(const LimitParams& lp, std::size_t n, double alpha,
                    const QuantileTable& p_table);

// The jump in the RSS thresholds is taken from `fit`; a, b and b0 from `lp`.
ConfidenceSet rss1_set(const StumpProblem& problem, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table);
ConfidenceSet rss2_set(const StumpProblem& problem, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table);
ConfidenceSet pivot_set(const StumpProblem& problem, const StumpFit& fit, const LimitParams& lp,
                        double alpha, const QuantileTable& p_table);

ConfidenceSet rss1_set(const Sample& sample, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table);
ConfidenceSet rss2_set(const Sample& sample, const StumpFit& fit, const LimitParams& lp,
                       double alpha, const QuantileTable& q_table);
ConfidenceSet pivot_set(const Sample& sample, const StumpFit& fit, const LimitParams& lp,
                        double alpha, const QuantileTable& p_table);

struct SubsampleSpec {
  double gamma = 0.6;  // block size m = round(n^gamma)
  std::size_t n_subsamples = 1000;
  std::uint64_t seed = 1;
};

// Split estimator applied to the full sample and to every subsample.
using SplitEstimator = std::function<double(const Sample&)>;

SplitEstimator stump_estimator(std::size_t min_side = 1);

std::size_t block_size(std::size_t n, double gamma);

// Sorted positions (into the x-sorted sample) of subsample b.
std::vector<std::size_t> subsample_indices(std::uint64_t seed, std::size_t n, std::size_t m,
                                           std::size_t b);

// Throws BlockTooSmall unless m >= 2 * min_side, BlockTooLarge unless m < n.
ConfidenceSet subsample_ci(const Sample& sample, const SplitEstimator& fit_fn,
                           const SubsampleSpec& spec, double alpha, std::size_t min_side = 1);

}  // namespace splitset
