#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace splitset {

// Paired predictor/response observations. Immutable once constructed.
class Sample {
 public:
  // Throws InvalidArgument on length mismatch or non-finite values and
  // DegenerateSample when fewer than two observations are given.
  Sample(std::vector<double> x, std::vector<double> y);

  std::size_t size() const noexcept { return x_.size(); }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }

  bool sorted_by_x() const noexcept { return sorted_; }

  // Copy of the sample ordered by x; ties keep their original order.
  Sample sorted() const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  bool sorted_ = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double v) const noexcept { return lo <= v && v <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace splitset
