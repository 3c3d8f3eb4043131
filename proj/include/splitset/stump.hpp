#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "splitset/sample.hpp"

namespace splitset {

struct StumpFit {
  double d_hat = 0.0;
  double beta_l = 0.0;
  double beta_u = 0.0;
  double rss = 0.0;
  std::size_t n_left = 0;
};

struct ProfileLevels {
  double beta_l = 0.0;
  double beta_u = 0.0;
};

// Admissible split points: distinct observed x values leaving at least
// min_side observations on each side. A split at value v puts every
// observation with x <= v on the left.
struct CandidateGrid {
  std::vector<double> values;
  std::vector<std::size_t> left_counts;

  std::size_t size() const noexcept { return values.size(); }
};

// Sorted view of a sample with the prefix sums needed to evaluate every
// stump statistic in O(1) per split (O(n) for the profiled split scan).
// Responses are stored centred at their mean to limit cancellation.
class StumpProblem {
 public:
  explicit StumpProblem(const Sample& sample, std::size_t min_side = 1);

  std::size_t size() const noexcept { return sorted_.size(); }
  std::size_t min_side() const noexcept { return min_side_; }
  std::span<const double> x() const noexcept { return sorted_.x(); }
  std::span<const double> y() const noexcept { return sorted_.y(); }
  const CandidateGrid& candidates() const noexcept { return grid_; }
  const Sample& sorted_sample() const noexcept { return sorted_; }

  // Number of observations with x <= d.
  std::size_t left_count(double d) const;

  StumpFit fit() const;

  ProfileLevels profile_levels(double d) const;
  ProfileLevels profile_levels_at_count(std::size_t k) const;

  // Sum of squared residuals with side means fitted at d.
  double profiled_rss(double d) const;

  // Minimiser over the candidate grid of the criterion with levels held
  // fixed; smallest split wins ties.
  double profiled_dhat(double beta_l, double beta_u) const;
  std::size_t profiled_dhat_index(double beta_l, double beta_u) const;

  double rss0(double beta_l, double beta_u, double d, const StumpFit& fit) const;
  double rss1(double d, const StumpFit& fit) const;
  double rss2(double d) const;

  // Split point minimising the criterion for levels profiled at candidate i.
  double profiled_dhat_at_candidate(std::size_t i) const;

 private:
  double between_score(std::size_t k) const;
  double profiled_rss_at_count(std::size_t k) const;
  // criterion(levels, split after k observations) minus a constant.
  double shift_criterion(double bl_c, double bu_c, std::size_t k) const;
  std::size_t argmin_shift(double bl_c, double bu_c) const;
  void require_two_sides(std::size_t k, double d) const;

  Sample sorted_;
  std::size_t min_side_;
  double mean_y_ = 0.0;
  double total_ss_ = 0.0;
  std::vector<double> csum_;  // csum_[k] = sum of centred y over the first k
  CandidateGrid grid_;
};

// Throws DegenerateSample if all x are equal or n < 2 * min_side.
StumpFit fit_stump(const Sample& sample, std::size_t min_side = 1);

// Throws EmptySide when d leaves one side empty.
ProfileLevels profile_levels(const Sample& sample, double d);

double rss1_stat(const Sample& sample, double d, const StumpFit& fit);

// Throws DegenerateLevels when beta_l == beta_u.
double profiled_dhat(const Sample& sample, double beta_l, double beta_u,
                     std::size_t min_side = 1);

double rss2_stat(const Sample& sample, double d, std::size_t min_side = 1);

double rss0_stat(const Sample& sample, double beta_l, double beta_u, double d,
                 const StumpFit& fit);

}  // namespace splitset
