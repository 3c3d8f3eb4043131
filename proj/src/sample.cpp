#include "splitset/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "splitset/error.hpp"

namespace splitset {

Sample::Sample(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    fail(ErrorCode::InvalidArgument,
         "x and y lengths differ (" + std::to_string(x_.size()) + " vs " +
             std::to_string(y_.size()) + ")");
  }
  if (x_.size() < 2) {
    fail(ErrorCode::DegenerateSample, "a sample needs at least two observations");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      fail(ErrorCode::InvalidArgument,
           "non-finite value in observation " + std::to_string(i));
    }
  }
  sorted_ = std::is_sorted(x_.begin(), x_.end());
}

Sample Sample::sorted() const {
  if (sorted_) return *this;
  std::vector<std::size_t> order(x_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [this](std::size_t a, std::size_t b) { return x_[a] < x_[b]; });
  std::vector<double> xs(order.size());
  std::vector<double> ys(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    xs[i] = x_[order[i]];
    ys[i] = y_[order[i]];
  }
  return Sample(std::move(xs), std::move(ys));
}

}  // namespace splitset
