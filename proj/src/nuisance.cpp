#include "splitset/nuisance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "splitset/error.hpp"

namespace splitset {
namespace {

constexpr double kWindow = 6.0;  // kernel truncated at |u| > kWindow

double gaussian(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

struct LocalSolve {
  Eigen::VectorXd coef;  // coefficients in the scaled basis ((x - t) / h)^j
  double leverage0 = 0.0;
};

// Weighted polynomial fit at t over sorted xs. Empty when the weighted
// design is rank deficient.
std::optional<LocalSolve> solve_local(std::span<const double> xs, std::span<const double> ys,
                                      double t, double h, std::size_t degree,
                                      bool want_leverage) {
  const auto lo = std::lower_bound(xs.begin(), xs.end(), t - kWindow * h) - xs.begin();
  const auto hi = std::upper_bound(xs.begin(), xs.end(), t + kWindow * h) - xs.begin();
  const Eigen::Index m = hi - lo;
  const Eigen::Index p = static_cast<Eigen::Index>(degree) + 1;
  if (m < p) return std::nullopt;

  Eigen::MatrixXd a(m, p);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t i = static_cast<std::size_t>(lo + r);
    const double u = (xs[i] - t) / h;
    const double sw = std::sqrt(gaussian(u));
    double pw = sw;
    for (Eigen::Index c = 0; c < p; ++c) {
      a(r, c) = pw;
      pw *= u;
    }
    rhs(r) = sw * ys[i];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) return std::nullopt;

  LocalSolve out;
  out.coef = qr.solve(rhs);
  if (want_leverage) {
    // Hat-matrix diagonal at u = 0: w(0) * [(A^T A)^{-1}]_{00}.
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(p);
    e0(0) = 1.0;
    const Eigen::VectorXd v = qr.colsPermutation().transpose() * e0;
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
    const Eigen::VectorXd z =
        r.transpose().template triangularView<Eigen::Lower>().solve(v);
    out.leverage0 = gaussian(0.0) * z.squaredNorm();
  }
  return out;
}

std::vector<double> resolve_grid(const CrossValidatedBandwidth& cv, std::span<const double> x) {
  return cv.grid.empty() ? default_cv_grid(x) : cv.grid;
}

double choose_bandwidth(const Sample& sorted, std::size_t degree, const BandwidthPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&policy)) {
    if (!(fixed->h > 0.0)) fail(ErrorCode::InvalidArgument, "bandwidth must be positive");
    return fixed->h;
  }
  const auto grid = resolve_grid(std::get<CrossValidatedBandwidth>(policy), sorted.x());
  return cv_bandwidth(sorted, degree, grid);
}

void require_local_size(const Sample& sample, std::size_t degree) {
  if (sample.size() < 5 * (degree + 1)) {
    fail(ErrorCode::TooFewPoints,
         "local polynomial fit of degree " + std::to_string(degree) + " needs at least " +
             std::to_string(5 * (degree + 1)) + " observations");
  }
}

double quantile_sorted(const std::vector<double>& v, double p) {
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + frac * (v[i + 1] - v[i]);
}

}  // namespace

void validate(const BandwidthPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&policy)) {
    if (!(fixed->h > 0.0) || !std::isfinite(fixed->h)) {
      fail(ErrorCode::InvalidArgument, "fixed bandwidth must be positive and finite");
    }
    return;
  }
  const auto& grid = std::get<CrossValidatedBandwidth>(policy).grid;
  if (grid.empty()) fail(ErrorCode::InvalidArgument, "bandwidth grid is empty");
  for (double h : grid) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      fail(ErrorCode::InvalidArgument, "bandwidth grid values must be positive and finite");
    }
  }
}

std::vector<double> default_cv_grid(std::span<const double> x, std::size_t count) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double range = *mx - *mn;
  if (!(range > 0.0)) fail(ErrorCode::DegenerateSample, "x has no spread");
  const double lo = range / 200.0;
  const double hi = range / 2.0;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = lo * std::pow(hi / lo, t);
  }
  return grid;
}

double rule_of_thumb_bandwidth(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorCode::TooFewPoints, "bandwidth rule needs at least two points");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  return 1.06 * spread * std::pow(static_cast<double>(n), -0.2);
}

double density_at(std::span<const double> x, double d, const BandwidthPolicy& policy) {
  if (x.size() < 10) fail(ErrorCode::TooFewPoints, "density estimate needs at least 10 points");
  double h = 0.0;
  if (const auto* fixed = std::get_if<FixedBandwidth>(&policy)) {
    h = fixed->h;
    if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "bandwidth must be positive");
  } else {
    h = rule_of_thumb_bandwidth(x);
  }
  if (!(h > 0.0)) {
    fail(ErrorCode::NonpositiveEstimate, "density bandwidth collapsed to zero (no spread in x)");
  }
  double s = 0.0;
  for (double v : x) s += gaussian((d - v) / h);
  const double est = s / (static_cast<double>(x.size()) * h);
  if (!(est > 0.0) || !std::isfinite(est)) {
    fail(ErrorCode::NonpositiveEstimate,
         "density estimate at " + std::to_string(d) + " is not positive");
  }
  return est;
}

double ecdf_at(std::span<const double> x, double d) {
  if (x.empty()) fail(ErrorCode::InvalidArgument, "empirical cdf of an empty sample");
  std::size_t count = 0;
  for (double v : x) count += v <= d ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(x.size());
}

double cv_bandwidth(const Sample& sample, std::size_t degree, std::span<const double> grid) {
  if (grid.empty()) fail(ErrorCode::InvalidArgument, "bandwidth grid is empty");
  const Sample sorted = sample.sorted();
  const auto xs = sorted.x();
  const auto ys = sorted.y();
  const std::size_t n = xs.size();
  // Score on at most 400 evenly spaced (in rank) observations.
  const std::size_t stride = std::max<std::size_t>(1, n / 400);

  double best_h = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  for (double h : grid) {
    if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "bandwidth grid values must be positive");
    double score = 0.0;
    std::size_t used = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n; i += stride) {
      const auto fit = solve_local(xs, ys, xs[i], h, degree, true);
      if (!fit || fit->leverage0 >= 1.0 - 1e-8) {
        ok = false;
        break;
      }
      const double resid = (ys[i] - fit->coef(0)) / (1.0 - fit->leverage0);
      score += resid * resid;
      ++used;
    }
    if (!ok || used == 0) continue;
    score /= static_cast<double>(used);
    if (score < best_score) {
      best_score = score;
      best_h = h;
    }
  }
  if (!(best_h > 0.0)) {
    fail(ErrorCode::SingularDesign, "local polynomial design is singular at every bandwidth");
  }
  return best_h;
}

LocalPolyFit local_poly_fit(const Sample& sample, double d, std::size_t degree,
                            const BandwidthPolicy& policy) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "local polynomial degree must be >= 1");
  require_local_size(sample, degree);
  const Sample sorted = sample.sorted();
  const double h = choose_bandwidth(sorted, degree, policy);
  const auto fit = solve_local(sorted.x(), sorted.y(), d, h, degree, false);
  if (!fit) {
    fail(ErrorCode::SingularDesign,
         "local polynomial design is singular at " + std::to_string(d) +
             " with bandwidth " + std::to_string(h));
  }
  return {fit->coef(0), fit->coef(1) / h, h};
}

double sigma2_at(const Sample& sample, double d, const BandwidthPolicy& policy,
                 std::size_t degree) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "local polynomial degree must be >= 1");
  require_local_size(sample, degree);
  const Sample sorted = sample.sorted();
  const auto xs = sorted.x();
  const auto ys = sorted.y();
  const double h_mean = choose_bandwidth(sorted, degree, policy);

  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto fit = solve_local(xs, ys, xs[i], h_mean, degree, false);
    if (!fit) {
      fail(ErrorCode::SingularDesign,
           "mean smoother is singular at x = " + std::to_string(xs[i]));
    }
    const double r = ys[i] - fit->coef(0);
    sq[i] = r * r;
  }

  const Sample squared(std::vector<double>(xs.begin(), xs.end()), std::move(sq));
  const double h_var = choose_bandwidth(squared, 1, policy);
  const auto var_fit = solve_local(squared.x(), squared.y(), d, h_var, 1, false);
  if (!var_fit) {
    fail(ErrorCode::SingularDesign, "variance smoother is singular at " + std::to_string(d));
  }
  return std::max(kSigma2Floor, var_fit->coef(0));
}

NuisanceEstimates estimate_nuisance(const Sample& sample, double d,
                                    const NuisanceOptions& options) {
  BandwidthPolicy policy = options.bandwidth;
  if (auto* cv = std::get_if<CrossValidatedBandwidth>(&policy); cv && cv->grid.empty()) {
    cv->grid = default_cv_grid(sample.x());
  }
  validate(policy);
  NuisanceEstimates out;
  out.density_at_d = density_at(sample.x(), d, policy);
  out.cdf_at_d = ecdf_at(sample.x(), d);
  out.fprime_at_d = local_poly_fit(sample, d, options.degree, policy).slope;
  out.sigma2_at_d = sigma2_at(sample, d, policy, options.degree);
  return out;
}

LimitParams limit_params(const NuisanceEstimates& nuis, double beta_l, double beta_u) {
  const double p = nuis.density_at_d;
  const double cdf = nuis.cdf_at_d;
  if (!(p > 0.0) || !std::isfinite(p)) {
    fail(ErrorCode::InvalidArgument, "density at the split must be positive");
  }
  if (!(cdf > 0.0 && cdf < 1.0)) {
    fail(ErrorCode::InvalidArgument, "cdf at the split must lie strictly inside (0, 1)");
  }
  if (!(nuis.sigma2_at_d > 0.0) || !std::isfinite(nuis.sigma2_at_d)) {
    fail(ErrorCode::InvalidArgument, "conditional variance at the split must be positive");
  }
  if (!std::isfinite(nuis.fprime_at_d) || !std::isfinite(beta_l) || !std::isfinite(beta_u)) {
    fail(ErrorCode::InvalidArgument, "limit parameter inputs must be finite");
  }
  if (beta_l == beta_u) {
    fail(ErrorCode::DegenerateLevels, "levels must differ for the split to be identified");
  }

  LimitParams lp;
  lp.jump = beta_l - beta_u;
  lp.a = std::sqrt(nuis.sigma2_at_d * p);
  lp.b0 = std::abs(nuis.fprime_at_d) * p / 2.0;
  lp.b = lp.b0 - 0.125 * std::abs(lp.jump) * p * p * (1.0 / cdf + 1.0 / (1.0 - cdf));
  lp.c1 = p * (beta_u - beta_l) / (2.0 * cdf);
  lp.c2 = p * (beta_u - beta_l) / (2.0 * (1.0 - cdf));
  lp.instability_warning = !(lp.b > 0.0);
  return lp;
}

}  // namespace splitset
