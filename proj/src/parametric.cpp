#include "splitset/parametric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "splitset/error.hpp"

namespace splitset {
namespace {

double horner(const std::vector<double>& coef, double u) {
  double v = 0.0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) v = v * u + *it;
  return v;
}

double horner_derivative(const std::vector<double>& coef, double u) {
  double v = 0.0;
  for (std::size_t j = coef.size(); j-- > 1;) v = v * u + static_cast<double>(j) * coef[j];
  return v;
}

}  // namespace

double ParametricFit::left_value(double x) const {
  return horner(coef_left, (x - center) / scale);
}

double ParametricFit::right_value(double x) const {
  return horner(coef_right, (x - center) / scale);
}

double ParametricFit::left_slope(double x) const {
  return horner_derivative(coef_left, (x - center) / scale) / scale;
}

double ParametricFit::right_slope(double x) const {
  return horner_derivative(coef_right, (x - center) / scale) / scale;
}

ParametricProblem::ParametricProblem(const Sample& sample, const WorkingModel& model,
                                     std::size_t min_side)
    : sorted_(sample.sorted()), model_(model), min_side_(min_side) {
  if (min_side_ == 0) fail(ErrorCode::InvalidArgument, "min_side must be positive");
  if (model.degree_left > kMaxWorkingDegree || model.degree_right > kMaxWorkingDegree) {
    fail(ErrorCode::InvalidArgument,
         "branch degrees are limited to " + std::to_string(kMaxWorkingDegree));
  }
  const auto xs = sorted_.x();
  const std::size_t n = xs.size();
  center_ = 0.5 * (xs.front() + xs.back());
  scale_ = 0.5 * (xs.back() - xs.front());
  if (!(scale_ > 0.0)) scale_ = 1.0;

  const std::size_t need_left = std::max(min_side_, model.degree_left + 1);
  const std::size_t need_right = std::max(min_side_, model.degree_right + 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (xs[i] == xs[i + 1]) continue;
    const std::size_t k = i + 1;
    if (k >= need_left && n - k >= need_right) {
      grid_.values.push_back(xs[i]);
      grid_.left_counts.push_back(k);
    }
  }
}

std::optional<std::vector<double>> ParametricProblem::side_fit(std::size_t begin, std::size_t end,
                                                               std::size_t degree,
                                                               double* rss) const {
  const auto xs = x();
  const auto ys = y();
  const Eigen::Index m = static_cast<Eigen::Index>(end - begin);
  const Eigen::Index p = static_cast<Eigen::Index>(degree) + 1;
  if (m < p) return std::nullopt;
  Eigen::MatrixXd design(m, p);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t i = begin + static_cast<std::size_t>(r);
    const double u = (xs[i] - center_) / scale_;
    double pw = 1.0;
    for (Eigen::Index c = 0; c < p; ++c) {
      design(r, c) = pw;
      pw *= u;
    }
    rhs(r) = ys[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < p) return std::nullopt;
  const Eigen::VectorXd coef = qr.solve(rhs);
  std::vector<double> out(coef.data(), coef.data() + coef.size());
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double r = ys[i] - horner(out, (xs[i] - center_) / scale_);
    s += r * r;
  }
  *rss = s;
  return out;
}

std::optional<ParametricFit> ParametricProblem::fit_at_count(std::size_t k) const {
  double rss_left = 0.0;
  double rss_right = 0.0;
  auto left = side_fit(0, k, model_.degree_left, &rss_left);
  if (!left) return std::nullopt;
  auto right = side_fit(k, size(), model_.degree_right, &rss_right);
  if (!right) return std::nullopt;
  ParametricFit f;
  f.d_hat = x()[k - 1];
  f.coef_left = std::move(*left);
  f.coef_right = std::move(*right);
  f.rss = rss_left + rss_right;
  f.n_left = k;
  f.center = center_;
  f.scale = scale_;
  return f;
}

ParametricFit ParametricProblem::fit() const {
  if (grid_.size() == 0) {
    fail(ErrorCode::DegenerateSample, "no admissible split leaves enough points for each branch");
  }
  std::optional<ParametricFit> best;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    auto f = fit_at_count(grid_.left_counts[i]);
    if (!f) continue;
    if (!best || f->rss < best->rss) best = std::move(f);
  }
  if (!best) fail(ErrorCode::SingularDesign, "every candidate split has a singular branch design");
  return *best;
}

std::optional<ParametricFit> ParametricProblem::fit_at(double d) const {
  const auto xs = x();
  const auto k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), d) - xs.begin());
  if (k == 0 || k == size()) {
    fail(ErrorCode::EmptySide,
         "split at " + std::to_string(d) + " leaves one side without observations");
  }
  auto f = fit_at_count(k);
  if (f) f->d_hat = d;
  return f;
}

double ParametricProblem::rss2(double d) const {
  const auto xs = x();
  const auto ys = y();
  const auto k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), d) - xs.begin());
  if (k == 0 || k == size()) {
    fail(ErrorCode::EmptySide,
         "split at " + std::to_string(d) + " leaves one side without observations");
  }
  const auto f = fit_at_count(k);
  if (!f) {
    fail(ErrorCode::SingularDesign, "branch design is singular at split " + std::to_string(d));
  }
  if (grid_.size() == 0) {
    fail(ErrorCode::DegenerateSample, "no admissible split leaves enough points for each branch");
  }
  // shift[j]: criterion change from moving the first j points to the left branch.
  std::vector<double> shift(size() + 1, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    const double rl = ys[i] - f->left_value(xs[i]);
    const double ru = ys[i] - f->right_value(xs[i]);
    shift[i + 1] = shift[i] + (rl * rl - ru * ru);
  }
  double best = shift[k];
  for (std::size_t j : grid_.left_counts) best = std::min(best, shift[j]);
  return shift[k] - best;
}

ParametricFit fit_parametric(const Sample& sample, const WorkingModel& model,
                             std::size_t min_side) {
  return ParametricProblem(sample, model, min_side).fit();
}

double rss2_parametric(const Sample& sample, const WorkingModel& model, double d,
                       std::size_t min_side) {
  return ParametricProblem(sample, model, min_side).rss2(d);
}

ParametricCalibration parametric_calibration(const ParametricFit& fit,
                                             const NuisanceEstimates& nuis, std::size_t n,
                                             double alpha, const QuantileTable& q_table) {
  if (!(nuis.density_at_d > 0.0) || !(nuis.sigma2_at_d > 0.0)) {
    fail(ErrorCode::InvalidArgument, "density and variance at the split must be positive");
  }
  ParametricCalibration c;
  c.jump = std::abs(fit.left_value(fit.d_hat) - fit.right_value(fit.d_hat));
  c.psi_slope = 0.5 * (fit.left_slope(fit.d_hat) + fit.right_slope(fit.d_hat));
  c.a = std::sqrt(nuis.sigma2_at_d * nuis.density_at_d);
  // Curvature as printed for polynomial branches (no factor 1/2).
  c.b0 = std::abs(nuis.fprime_at_d - c.psi_slope) * nuis.density_at_d;
  if (!(c.jump > 1e-12)) {
    fail(ErrorCode::Unstable, "branches meet at the split: no jump to calibrate against");
  }
  if (!(c.b0 > 1e-12)) {
    fail(ErrorCode::Unstable, "f'(d) matches the working-model slope: b0 vanishes");
  }
  c.threshold = rss_threshold(n, c.jump, c.a, c.b0, alpha, q_table);
  return c;
}

ConfidenceSet rss2_ci_parametric(const ParametricProblem& problem, const ParametricFit& fit,
                                 const NuisanceEstimates& nuis, double alpha,
                                 const QuantileTable& q_table) {
  const auto cal = parametric_calibration(fit, nuis, problem.size(), alpha, q_table);
  const auto& grid = problem.candidates();
  std::vector<bool> accept(grid.size());
  std::size_t singular = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      accept[i] = problem.rss2(grid.values[i]) <= cal.threshold;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularDesign) throw;
      accept[i] = false;
      ++singular;
    }
  }
  ConfidenceSet set;
  set.method = Method::Rss2;
  set.level = 1.0 - alpha;
  set.point_estimate = fit.d_hat;
  set.accepted = accepted_components(grid.values, accept);
  set.longest_component = longest_of(set.accepted);
  set.diagnostics["threshold"] = cal.threshold;
  set.diagnostics["a"] = cal.a;
  set.diagnostics["b0"] = cal.b0;
  set.diagnostics["jump"] = cal.jump;
  set.diagnostics["psi_slope"] = cal.psi_slope;
  set.diagnostics["quantile"] = maxq1_quantile(alpha, q_table);
  set.diagnostics["singular_candidates"] = static_cast<double>(singular);
  return set;
}

ConfidenceSet rss2_ci_parametric(const Sample& sample, const WorkingModel& model,
                                 const ParametricFit& fit, const NuisanceEstimates& nuis,
                                 double alpha, const QuantileTable& q_table) {
  return rss2_ci_parametric(ParametricProblem(sample, model), fit, nuis, alpha, q_table);
}

}  // namespace splitset
