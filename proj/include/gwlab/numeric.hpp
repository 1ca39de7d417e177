#pragma once

#include <cmath>
#include <numbers>

namespace gwlab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces x to [0, 1). Values that round up to 1 are mapped to 0.
inline double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// Distance between two points of the circle R/Z.
inline double circle_distance(double a, double b) {
  double d = std::fabs(wrap01(a) - wrap01(b));
  return d > 0.5 ? 1.0 - d : d;
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace gwlab
