#include "gwlab/trig.hpp"

#include <cmath>

#include "gwlab/numeric.hpp"

namespace gwlab {

namespace {

// Angle 2 pi k x with k x reduced mod 1 first, so large k x keeps full precision.
double angle(int k, double x) { return kTwoPi * wrap01(static_cast<double>(k) * x); }

}  // namespace

double TrigPoly::value(double x) const {
  double s = mean;
  for (const auto& h : harmonics) {
    double t = angle(h.k, x);
    s += h.cos_coeff * std::cos(t) + h.sin_coeff * std::sin(t);
  }
  return s;
}

Jet TrigPoly::jet(double x) const {
  Jet j{mean, 0.0, 0.0};
  for (const auto& h : harmonics) {
    double t = angle(h.k, x);
    double c = std::cos(t);
    double s = std::sin(t);
    double w = kTwoPi * h.k;
    j.value += h.cos_coeff * c + h.sin_coeff * s;
    j.d1 += w * (h.sin_coeff * c - h.cos_coeff * s);
    j.d2 -= w * w * (h.cos_coeff * c + h.sin_coeff * s);
  }
  return j;
}

double TrigPoly::sup_bound() const {
  double s = std::fabs(mean);
  for (const auto& h : harmonics) s += std::fabs(h.cos_coeff) + std::fabs(h.sin_coeff);
  return s;
}

double TrigPoly::derivative_sup_bound() const {
  double s = 0.0;
  for (const auto& h : harmonics) s += kTwoPi * h.k * (std::fabs(h.cos_coeff) + std::fabs(h.sin_coeff));
  return s;
}

double TrigPoly::second_derivative_sup_bound() const {
  double s = 0.0;
  for (const auto& h : harmonics) {
    double w = kTwoPi * h.k;
    s += w * w * (std::fabs(h.cos_coeff) + std::fabs(h.sin_coeff));
  }
  return s;
}

}  // namespace gwlab
