#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "splitset/confidence_sets.hpp"
#include "splitset/limit_process.hpp"
#include "splitset/nuisance.hpp"
#include "splitset/sample.hpp"

namespace splitset {

// Polynomial branches left and right of the split.
struct WorkingModel {
  std::size_t degree_left = 0;
  std::size_t degree_right = 0;
};

inline constexpr std::size_t kMaxWorkingDegree = 5;

// Branch polynomials are expressed in the standardised variable
// u = (x - center) / scale, which keeps the side designs well conditioned.
struct ParametricFit {
  double d_hat = 0.0;
  std::vector<double> coef_left;
  std::vector<double> coef_right;
  double rss = 0.0;
  std::size_t n_left = 0;
  double center = 0.0;
  double scale = 1.0;

  double left_value(double x) const;
  double right_value(double x) const;
  double left_slope(double x) const;
  double right_slope(double x) const;
};

class ParametricProblem {
 public:
  ParametricProblem(const Sample& sample, const WorkingModel& model, std::size_t min_side = 1);

  std::size_t size() const noexcept { return sorted_.size(); }
  const WorkingModel& model() const noexcept { return model_; }
  const CandidateGrid& candidates() const noexcept { return grid_; }
  std::span<const double> x() const noexcept { return sorted_.x(); }
  std::span<const double> y() const noexcept { return sorted_.y(); }

  // Throws SingularDesign if every candidate has a rank-deficient side.
  ParametricFit fit() const;

  // Profiled branch coefficients at split d (empty if a side is singular).
  std::optional<ParametricFit> fit_at(double d) const;

  // Criterion at d with branches fitted at d, minus its minimum over the
  // candidate grid with those branches frozen.
  double rss2(double d) const;

 private:
  std::optional<std::vector<double>> side_fit(std::size_t begin, std::size_t end,
                                              std::size_t degree, double* rss) const;
  std::optional<ParametricFit> fit_at_count(std::size_t k) const;

  Sample sorted_;
  WorkingModel model_;
  std::size_t min_side_;
  double center_ = 0.0;
  double scale_ = 1.0;
  CandidateGrid grid_;
};

ParametricFit fit_parametric(const Sample& sample, const WorkingModel& model,
                             std::size_t min_side = 1);

double rss2_parametric(const Sample& sample, const WorkingModel& model, double d,
                       std::size_t min_side = 1);

// Threshold ingredients evaluated once at the fitted split.
struct ParametricCalibration {
  double jump = 0.0;         // |Psi_l(d_hat) - Psi_u(d_hat)|
  double a = 0.0;            // sqrt(sigma2 * p)
  double b0 = 0.0;           // |f'(d_hat) - Psi'(d_hat)| * p
  double psi_slope = 0.0;    // (Psi_l' + Psi_u') / 2 at d_hat
  double threshold = 0.0;
};

ParametricCalibration parametric_calibration(const ParametricFit& fit,
                                             const NuisanceEstimates& nuis, std::size_t n,
                                             double alpha, const QuantileTable& q_table);

ConfidenceSet rss2_ci_parametric(const ParametricProblem& problem, const ParametricFit& fit,
                                 const NuisanceEstimates& nuis, double alpha,
                                 const QuantileTable& q_table);

ConfidenceSet rss2_ci_parametric(const Sample& sample, const WorkingModel& model,
                                 const ParametricFit& fit, const NuisanceEstimates& nuis,
                                 double alpha, const QuantileTable& q_table);

}  // namespace splitset
