#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace marsim {

// Growing series with prefix sums so window means and population variances
// over inclusive index ranges cost O(1). Values are stored shifted by a
// fixed base to keep the squared sums well conditioned (prices hover around
// 100 for thousands of steps).
class PrefixStats {
 public:
  explicit PrefixStats(double shift = 0.0) : shift_(shift) {
    sum_.push_back(0.0);
    sum_sq_.push_back(0.0);
  }

  void push(double x) {
    const double v = x - shift_;
    sum_.push_back(sum_.back() + v);
    sum_sq_.push_back(sum_sq_.back() + v * v);
  }

  std::size_t size() const { return sum_.size() - 1; }

  // Inclusive [lo, hi]
  double mean(std::size_t lo, std::size_t hi) const {
    check(lo, hi);
    const double n = static_cast<double>(hi - lo + 1);
    return shift_ + (sum_[hi + 1] - sum_[lo]) / n;
  }

  // Population variance over inclusive [lo, hi], clamped at zero.
  double variance(std::size_t lo, std::size_t hi) const {
    check(lo, hi);
    const double n = static_cast<double>(hi - lo + 1);
    const double s = sum_[hi + 1] - sum_[lo];
    const double ss = sum_sq_[hi + 1] - sum_sq_[lo];
    return std::max(0.0, ss / n - (s / n) * (s / n));
  }

 private:
  void check(std::size_t lo, std::size_t hi) const {
    if (lo > hi || hi >= size())
      throw std::out_of_range("PrefixStats: bad window");
  }

  double shift_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

}  // namespace marsim
