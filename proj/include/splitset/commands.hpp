#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitset/confidence_sets.hpp"
#include "splitset/io.hpp"
#include "splitset/nuisance.hpp"
#include "splitset/parametric.hpp"
#include "splitset/sample.hpp"

namespace splitset {

// "stump" or "poly:kl,ku".
struct ModelSpec {
  bool stump = true;
  WorkingModel poly;
};
ModelSpec parse_model(std::string_view text);

// "cv" or "fixed:h".
BandwidthPolicy parse_bandwidth(std::string_view text);

// "auto" (nullopt) or "manual:p,F,fprime,sigma2".
std::optional<NuisanceEstimates> parse_nuisance_spec(std::string_view text);

struct FitOptions {
  std::string model = "stump";
  std::string link = "identity";
  std::size_t min_side = 1;
  std::string bandwidth = "cv";
};

FitReport build_fit_report(const Sample& sample, const FitOptions& options);

struct CiOptions {
  std::string method = "rss2";
  double alpha = 0.05;
  double gamma = 0.6;
  std::size_t subsamples = 1000;
  std::uint64_t seed = 1;
  std::string nuisance = "auto";
  std::string bandwidth = "cv";
  std::size_t min_side = 1;
  std::string model = "stump";
  std::string link = "identity";
};

struct CiResult {
  ConfidenceSet set;
  std::string report;  // JSON
};

// Estimator errors are rethrown with the method named in the message.
CiResult run_ci(const Sample& sample, const CiOptions& options);

// format: "long" or "wide".
std::string run_simulate(std::string_view scenario_json, std::string_view format);

struct QuantileOptions {
  std::string dist = "chernoff";
  std::vector<double> levels;  // upper-tail levels; empty means the whole table
  bool regenerate = false;
  std::size_t reps = 200000;
  double half_width = 3.0;
  double step = 5e-4;
  std::uint64_t seed = 20070611;
};

std::string run_quantiles(const QuantileOptions& options);

}  // namespace splitset
