#include "splitset/stump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "splitset/error.hpp"

namespace splitset {

StumpProblem::StumpProblem(const Sample& sample, std::size_t min_side)
    : sorted_(sample.sorted()), min_side_(min_side) {
  if (min_side_ == 0) fail(ErrorCode::InvalidArgument, "min_side must be positive");
  const auto xs = sorted_.x();
  const auto ys = sorted_.y();
  const std::size_t n = xs.size();

  double sum = 0.0;
  for (double v : ys) sum += v;
  mean_y_ = sum / static_cast<double>(n);

  csum_.resize(n + 1);
  csum_[0] = 0.0;
  total_ss_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = ys[i] - mean_y_;
    csum_[i + 1] = csum_[i] + c;
    total_ss_ += c * c;
  }

  // Split candidates sit at the last observation of each run of equal x.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (xs[i] == xs[i + 1]) continue;
    const std::size_t k = i + 1;
    if (k >= min_side_ && n - k >= min_side_) {
      grid_.values.push_back(xs[i]);
      grid_.left_counts.push_back(k);
    }
  }
}

std::size_t StumpProblem::left_count(double d) const {
  const auto xs = x();
  return static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), d) - xs.begin());
}

double StumpProblem::between_score(std::size_t k) const {
  const double n = static_cast<double>(size());
  const double kl = static_cast<double>(k);
  const double c = csum_[k];
  return c * c * n / (kl * (n - kl));
}

double StumpProblem::profiled_rss_at_count(std::size_t k) const {
  return std::max(0.0, total_ss_ - between_score(k));
}

void StumpProblem::require_two_sides(std::size_t k, double d) const {
  if (k == 0 || k == size()) {
    fail(ErrorCode::EmptySide,
         "split at " + std::to_string(d) + " leaves one side without observations");
  }
}

StumpFit StumpProblem::fit() const {
  if (size() < 2 * min_side_) {
    fail(ErrorCode::DegenerateSample,
         "n = " + std::to_string(size()) + " is below 2 * min_side = " +
             std::to_string(2 * min_side_));
  }
  if (grid_.size() == 0) {
    fail(ErrorCode::DegenerateSample, "no admissible split: x has too few distinct values");
  }
  std::size_t best = 0;
  double best_score = between_score(grid_.left_counts[0]);
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    const double s = between_score(grid_.left_counts[i]);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  const std::size_t k = grid_.left_counts[best];
  const auto levels = profile_levels_at_count(k);
  StumpFit f;
  f.d_hat = grid_.values[best];
  f.beta_l = levels.beta_l;
  f.beta_u = levels.beta_u;
  f.rss = std::max(0.0, total_ss_ - best_score);
  f.n_left = k;
  return f;
}

ProfileLevels StumpProblem::profile_levels_at_count(std::size_t k) const {
  const std::size_t n = size();
  const double left = csum_[k] / static_cast<double>(k);
  const double right = (csum_[n] - csum_[k]) / static_cast<double>(n - k);
  return {mean_y_ + left, mean_y_ + right};
}

ProfileLevels StumpProblem::profile_levels(double d) const {
  const std::size_t k = left_count(d);
  require_two_sides(k, d);
  return profile_levels_at_count(k);
}

double StumpProblem::profiled_rss(double d) const {
  const std::size_t k = left_count(d);
  require_two_sides(k, d);
  return profiled_rss_at_count(k);
}

double StumpProblem::shift_criterion(double bl_c, double bu_c, std::size_t k) const {
  // Moving observation i from the right to the left side changes its squared
  // residual by (bu - bl)(2 y_i - bl - bu).
  return (bu_c - bl_c) * (2.0 * csum_[k] - static_cast<double>(k) * (bl_c + bu_c));
}

std::size_t StumpProblem::argmin_shift(double bl_c, double bu_c) const {
  if (grid_.size() == 0) {
    fail(ErrorCode::DegenerateSample, "no admissible split: x has too few distinct values");
  }
  std::size_t best = 0;
  double best_value = shift_criterion(bl_c, bu_c, grid_.left_counts[0]);
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    const double v = shift_criterion(bl_c, bu_c, grid_.left_counts[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

std::size_t StumpProblem::profiled_dhat_index(double beta_l, double beta_u) const {
  if (!std::isfinite(beta_l) || !std::isfinite(beta_u)) {
    fail(ErrorCode::InvalidArgument, "levels must be finite");
  }
  if (beta_l == beta_u) {
    fail(ErrorCode::DegenerateLevels, "equal levels make the split criterion constant");
  }
  return argmin_shift(beta_l - mean_y_, beta_u - mean_y_);
}

double StumpProblem::profiled_dhat(double beta_l, double beta_u) const {
  return grid_.values[profiled_dhat_index(beta_l, beta_u)];
}

double StumpProblem::profiled_dhat_at_candidate(std::size_t i) const {
  const std::size_t k = grid_.left_counts.at(i);
  const std::size_t n = size();
  const double bl_c = csum_[k] / static_cast<double>(k);
  const double bu_c = (csum_[n] - csum_[k]) / static_cast<double>(n - k);
  if (bl_c == bu_c) {
    fail(ErrorCode::DegenerateLevels,
         "profile levels coincide at split " + std::to_string(grid_.values[i]));
  }
  return grid_.values[argmin_shift(bl_c, bu_c)];
}

double StumpProblem::rss0(double beta_l, double beta_u, double d, const StumpFit& fit) const {
  if (!std::isfinite(beta_l) || !std::isfinite(beta_u) || !std::isfinite(d)) {
    fail(ErrorCode::InvalidArgument, "rss0 arguments must be finite");
  }
  const auto xs = x();
  const auto ys = y();
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (xs[i] <= d ? beta_l : beta_u);
    s += r * r;
  }
  return s - fit.rss;
}

double StumpProblem::rss1(double d, const StumpFit& fit) const {
  return std::max(0.0, profiled_rss(d) - fit.rss);
}

double StumpProblem::rss2(double d) const {
  const std::size_t k = left_count(d);
  require_two_sides(k, d);
  const std::size_t n = size();
  const double bl_c = csum_[k] / static_cast<double>(k);
  const double bu_c = (csum_[n] - csum_[k]) / static_cast<double>(n - k);
  if (bl_c == bu_c) {
    fail(ErrorCode::DegenerateLevels,
         "profile levels coincide at split " + std::to_string(d));
  }
  const double at_d = shift_criterion(bl_c, bu_c, k);
  const double best = shift_criterion(bl_c, bu_c, grid_.left_counts[argmin_shift(bl_c, bu_c)]);
  // d itself competes even when it lies off the candidate grid.
  return at_d - std::min(at_d, best);
}

StumpFit fit_stump(const Sample& sample, std::size_t min_side) {
  return StumpProblem(sample, min_side).fit();
}

ProfileLevels profile_levels(const Sample& sample, double d) {
  return StumpProblem(sample).profile_levels(d);
}

double rss1_stat(const Sample& sample, double d, const StumpFit& fit) {
  return StumpProblem(sample).rss1(d, fit);
}

double profiled_dhat(const Sample& sample, double beta_l, double beta_u,
                     std::size_t min_side) {
  return StumpProblem(sample, min_side).profiled_dhat(beta_l, beta_u);
}

double rss2_stat(const Sample& sample, double d, std::size_t min_side) {
  return StumpProblem(sample, min_side).rss2(d);
}

double rss0_stat(const Sample& sample, double beta_l, double beta_u, double d,
                 const StumpFit& fit) {
  return StumpProblem(sample).rss0(beta_l, beta_u, d, fit);
}

}  // namespace splitset
