#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "splitset/sample.hpp"

namespace splitset {

// Plug-in estimates of the regression nuisance functions at a split point.
struct NuisanceEstimates {
  double density_at_d = 0.0;  // p_X(d)
  double cdf_at_d = 0.0;      // F_X(d)
  double fprime_at_d = 0.0;   // f'(d)
  double sigma2_at_d = 0.0;   // Var(Y | X = d)
};

// Constants of the cube-root limit law of the stump estimators.
struct LimitParams {
  double a = 0.0;
  double b = 0.0;
  double b0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double jump = 0.0;  // beta_l - beta_u
  // Set when b <= 0; Wald and RSS1 procedures refuse such parameters.
  bool instability_warning = false;
};

struct FixedBandwidth {
  double h = 0.0;
};

struct CrossValidatedBandwidth {
  std::vector<double> grid;
};

using BandwidthPolicy = std::variant<FixedBandwidth, CrossValidatedBandwidth>;

// Validates h > 0 / a nonempty positive grid; throws InvalidArgument.
void validate(const BandwidthPolicy& policy);

// Log-spaced grid between range/200 and range/2 of the data.
std::vector<double> default_cv_grid(std::span<const double> x, std::size_t count = 20);

// 1.06 * min(sd, IQR / 1.34) * n^(-1/5).
double rule_of_thumb_bandwidth(std::span<const double> x);

// Gaussian kernel density estimate at d. A fixed policy uses its bandwidth;
// a cross-validated policy falls back to the rule-of-thumb bandwidth.
double density_at(std::span<const double> x, double d, const BandwidthPolicy& policy);

// Fraction of observations with x <= d.
double ecdf_at(std::span<const double> x, double d);

struct LocalPolyFit {
  double value = 0.0;  // f(d)
  double slope = 0.0;  // f'(d)
  double bandwidth = 0.0;
};

// Kernel-weighted polynomial least squares centred at d.
LocalPolyFit local_poly_fit(const Sample& sample, double d, std::size_t degree,
                            const BandwidthPolicy& policy);

// Leave-one-out cross-validated bandwidth for a local polynomial smoother.
// Throws SingularDesign when no grid bandwidth gives a well-posed fit.
double cv_bandwidth(const Sample& sample, std::size_t degree, std::span<const double> grid);

inline constexpr double kSigma2Floor = 1e-12;

// Local-linear smooth of squared residuals from a local polynomial fit of
// the given degree, evaluated at d and floored at kSigma2Floor.
double sigma2_at(const Sample& sample, double d, const BandwidthPolicy& policy,
                 std::size_t degree = 2);

struct NuisanceOptions {
  BandwidthPolicy bandwidth = CrossValidatedBandwidth{};  // empty grid: data default
  std::size_t degree = 2;
};

NuisanceEstimates estimate_nuisance(const Sample& sample, double d,
                                    const NuisanceOptions& options = {});

LimitParams limit_params(const NuisanceEstimates& nuis, double beta_l, double beta_u);

}  // namespace splitset
