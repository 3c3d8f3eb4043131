#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitset/confidence_sets.hpp"
#include "splitset/nuisance.hpp"
#include "splitset/sample.hpp"

namespace splitset {

// Y = f(X) + e with X ~ Unif[0, 1], f the logistic curve rising at 0.5 with
// slope 15, and e | X ~ N(0, sigma^2(X)).
enum class ErrorModel {
  Homoscedastic,    // sigma^2 = 0.25
  Heteroscedastic,  // sigma^2(x) = exp(-2.77 x)
  Noiseless,        // sigma^2 = 0, for harness checks
};

std::string_view error_model_name(ErrorModel model) noexcept;
ErrorModel parse_error_model(std::string_view name);

double sigmoid_mean(double x);
double sigmoid_slope(double x);
double error_variance(ErrorModel model, double x);

Sample generate_sample(std::size_t n, ErrorModel model, std::uint64_t seed);

struct TrueModel {
  double d0 = 0.5;
  double beta_l0 = 0.0;
  double beta_u0 = 0.0;
  NuisanceEstimates nuisance;
  LimitParams limits;
};

TrueModel true_limit_constants(ErrorModel model);

enum class NuisanceMode { TrueValues, Estimated };

std::string_view nuisance_mode_name(NuisanceMode mode) noexcept;
NuisanceMode parse_nuisance_mode(std::string_view name);

std::vector<double> default_pilot_grid();

struct Scenario {
  std::size_t n = 500;
  std::size_t reps = 1000;
  ErrorModel error_model = ErrorModel::Homoscedastic;
  std::vector<Method> methods = {Method::Wald, Method::Rss1, Method::Rss2};
  double alpha = 0.05;
  NuisanceMode nuisance_mode = NuisanceMode::TrueValues;
  std::uint64_t seed = 1;
  // Subsampling: a fixed block exponent, or pilot selection when unset.
  std::optional<double> gamma;
  std::size_t n_subsamples = 1000;
  std::vector<double> pilot_grid = default_pilot_grid();
  std::size_t pilot_reps = 200;
};

// Throws ConfigError on invalid fields.
void validate(const Scenario& scenario);

struct MethodStats {
  std::size_t successes = 0;
  std::size_t covered = 0;       // d0 inside the longest component
  std::size_t covered_full = 0;  // d0 inside the hull of the accepted set
  double total_length = 0.0;
  double total_full_length = 0.0;
  std::map<std::string, std::size_t> failures;  // error code -> count

  std::size_t failure_count() const;
  double coverage() const;
  double full_coverage() const;
  double mean_length() const;
  double mean_full_length() const;
  // sqrt(p (1 - p) / successes)
  double coverage_se() const;
};

struct CoverageReport {
  Scenario scenario;
  std::optional<double> selected_gamma;
  std::vector<std::pair<Method, MethodStats>> methods;

  const MethodStats& stats(Method method) const;
};

using NuisanceEstimator = std::function<NuisanceEstimates(const Sample&, double d)>;

NuisanceEstimator default_nuisance_estimator();

// Pilot coverage of the subsampling interval for each exponent; returns the
// exponent with coverage closest to 1 - alpha (smaller exponent on ties).
double select_block_exponent(const Scenario& scenario, const std::vector<double>& grid,
                             std::size_t pilot_reps, double alpha);

CoverageReport run_coverage_experiment(const Scenario& scenario,
                                       const NuisanceEstimator& estimator =
                                           default_nuisance_estimator());

// One row per (scenario, method).
std::string format_report_long(const std::vector<CoverageReport>& reports);

// One row per scenario with coverage and length columns per method.
std::string reproduce_table(const std::vector<Scenario>& rows);
std::string format_report_wide(const std::vector<CoverageReport>& reports);

}  // namespace splitset
