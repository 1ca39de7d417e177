#pragma once

#include <vector>

namespace gwlab {

/// One harmonic a cos(2 pi k x) + b sin(2 pi k x).
struct Harmonic {
  int k = 1;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;

  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Value and first two derivatives of a function at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// 1-periodic trigonometric polynomial mean + sum of harmonics, evaluated exactly.
struct TrigPoly {
  double mean = 0.0;
  std::vector<Harmonic> harmonics;

  double value(double x) const;
  Jet jet(double x) const;

  /// Upper bound for sup |p|.
  double sup_bound() const;
  /// Upper bound for sup |p'|.
  double derivative_sup_bound() const;
  /// Upper bound for sup |p''|, i.e. a Lipschitz constant of p'.
  double second_derivative_sup_bound() const;

  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;
};

}  // namespace gwlab
