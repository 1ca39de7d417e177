#include "gwlab/weierstrass.hpp"

#include <cmath>
#include <string>

#include "gwlab/errors.hpp"
#include "gwlab/numeric.hpp"

namespace gwlab {

namespace {

// Far above rounding, so the injected noise is not quantised by it.
constexpr double kDitherAmplitude = 0x1.0p-40;

}  // namespace

SystemHandle::SystemHandle(CircleMapSpec map, ObservableSpec observable, TruncationPolicy policy, double hoelder_eps,
                           int grid_size)
    : map_(std::move(map)),
      observable_(std::move(observable)),
      bounds_(derivative_bounds(map_, grid_size)),
      policy_(policy),
      hoelder_eps_(hoelder_eps) {
  if (!(policy_.tol > 0.0)) throw ConfigError("truncation tol must be > 0");
  if (policy_.max_terms < 1) throw ConfigError("truncation max_terms must be >= 1");
  if (!(hoelder_eps_ > 0.0 && hoelder_eps_ < 1.0)) throw ConfigError("hoelder_eps must lie in (0, 1)");
  for (const auto& h : observable_.harmonics) {
    if (h.k < 1) throw ConfigError("observable '" + observable_.name + "': harmonic index must be >= 1");
  }

  v_bound_ = observable_.trig_part().sup_bound();
  if (observable_.coboundary_of) v_bound_ += observable_.coboundary_of->sup_bound() * (1.0 + bounds_.B);

  const double b = bounds_.b;
  terms_ = 1;
  if (v_bound_ > 0.0) {
    double needed = std::ceil(std::log(v_bound_ / ((b - 1.0) * policy_.tol)) / std::log(b));
    if (needed > policy_.max_terms) {
      throw ConfigError("truncation: " + std::to_string(static_cast<long long>(needed)) +
                        " series terms needed for tol " + std::to_string(policy_.tol) + " but max_terms is " +
                        std::to_string(policy_.max_terms));
    }
    terms_ = std::max(1, static_cast<int>(needed));
  }
}

SystemHandle SystemHandle::with_policy(TruncationPolicy policy) const {
  return SystemHandle(map_, observable_, policy, hoelder_eps_, bounds_.grid_size);
}

Jet SystemHandle::v_jet(double x) const {
  Jet j = observable_.trig_part().jet(x);
  if (observable_.coboundary_of) {
    const TrigPoly& a0 = *observable_.coboundary_of;
    MapValue m = eval_map(map_, x);
    Jet a = a0.jet(x);
    Jet af = a0.jet(m.f);
    j.value += af.value - m.df * a.value;
    j.d1 += af.d1 * m.df - m.d2f * a.value - m.df * a.d1;
  }
  return j;
}

double SystemHandle::v(double x) const {
  if (observable_.coboundary_of) return v_jet(x).value;
  double s = observable_.mean_coeff;
  for (const auto& h : observable_.harmonics) {
    double t = kTwoPi * wrap01(static_cast<double>(h.k) * x);
    s += h.cos_coeff * std::cos(t) + h.sin_coeff * std::sin(t);
  }
  return s;
}

double alpha(const SystemHandle& sys, double x) {
  double y = wrap01(x);
  double product = 1.0;
  CompensatedSum sum;
  for (int n = 1; n <= sys.series_terms(); ++n) {
    double vy = sys.v(y);
    MapValue m = eval_map(sys.map(), y);
    product *= m.df;
    sum += -vy / product;
    y = wrap01(m.f);
  }
  return sum.value();
}

double cohomological_residual(const SystemHandle& sys, double x) {
  MapValue m = eval_map(sys.map(), x);
  return sys.v(x) - alpha(sys, m.f) + m.df * alpha(sys, x);
}

double phi(const SystemHandle& sys, double x) {
  MapValue m = eval_map(sys.map(), x);
  double dv = sys.v_jet(x).d1;
  return -(dv + alpha(sys, x) * m.d2f) / m.df;
}

int stopping_time(const SystemHandle& sys, double x, double h) {
  double ah = std::fabs(h);
  if (!(ah > 0.0 && ah < 1.0)) throw ConfigError("stopping_time: requires 0 < |h| < 1");
  const double target = 1.0 / ah;
  double y = wrap01(x);
  double product = 1.0;
  for (int n = 0; n < 100000; ++n) {
    MapValue m = eval_map(sys.map(), y);
    double next = product * std::fabs(m.df);
    if (next >= target) return n;
    product = next;
    y = wrap01(m.f);
  }
  throw ConvergenceFailure("stopping_time: product of |Df| never reached 1/|h|");
}

void phi_along_orbit(const SystemHandle& sys, double x, std::span<double> out, Rng* dither) {
  const std::size_t n = out.size();
  if (n == 0) return;
  std::vector<double> v(n), df(n), d2f(n), dv(n);
  double y = wrap01(x);
  for (std::size_t i = 0; i < n; ++i) {
    MapValue m = eval_map(sys.map(), y);
    Jet vj = sys.v_jet(y);
    v[i] = vj.value;
    dv[i] = vj.d1;
    df[i] = m.df;
    d2f[i] = m.d2f;
    double next = m.f;
    if (dither) next += (2.0 * uniform01(*dither) - 1.0) * kDitherAmplitude;
    y = wrap01(next);
  }
  double a = alpha(sys, y);
  for (std::size_t r = n; r-- > 0;) {
    a = (a - v[r]) / df[r];
    out[r] = -(dv[r] + a * d2f[r]) / df[r];
  }
}

double birkhoff_sum_phi(const SystemHandle& sys, double x, int n) {
  if (n < 0) throw ConfigError("birkhoff_sum_phi: n must be >= 0");
  if (n == 0) return 0.0;
  std::vector<double> values(static_cast<std::size_t>(n));
  phi_along_orbit(sys, x, values);
  CompensatedSum s;
  for (double p : values) s += p;
  return s.value();
}

double increment(const SystemHandle& sys, double x, double h) {
  double ah = std::fabs(h);
  if (!(ah > 0.0 && ah < 1.0)) throw ConfigError("increment: requires 0 < |h| < 1");
  return alpha(sys, x + h) - alpha(sys, x);
}

double residual_ratio(const SystemHandle& sys, double x, double h) {
  double inc = increment(sys, x, h);
  int n = stopping_time(sys, x, h);
  return (inc - h * birkhoff_sum_phi(sys, x, n)) / h;
}

double second_difference(const SystemHandle& sys, double x, double h) {
  double ah = std::fabs(h);
  if (!(ah > 0.0 && ah <= 1.0)) throw ConfigError("second_difference: requires 0 < |h| <= 1");
  return alpha(sys, x + h) + alpha(sys, x - h) - 2.0 * alpha(sys, x);
}

double zygmund_ratio(const SystemHandle& sys, double x, double h) {
  return std::fabs(second_difference(sys, x, h)) / std::fabs(h);
}

double omega_ratio(const SystemHandle& sys, double x, double h) {
  return second_difference(sys, x, h) / std::pow(std::fabs(h), 1.0 + sys.hoelder_eps());
}

}  // namespace gwlab
