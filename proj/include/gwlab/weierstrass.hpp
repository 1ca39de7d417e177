#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwlab/dynamics.hpp"
#include "gwlab/random.hpp"
#include "gwlab/trig.hpp"

namespace gwlab {

/// Observable v(x) = c0 + sum_k (c_k cos 2 pi k x + s_k sin 2 pi k x).
///
/// When `coboundary_of` holds a trigonometric polynomial a0, the twisted
/// coboundary a0(f(x)) - Df(x) a0(x) is added to v. The solution of the
/// cohomological equation is then known in closed form, which the tests use.
struct ObservableSpec {
  double mean_coeff = 0.0;
  std::vector<Harmonic> harmonics;
  std::string name;
  std::optional<TrigPoly> coboundary_of;

  TrigPoly trig_part() const { return TrigPoly{mean_coeff, harmonics}; }

  friend bool operator==(const ObservableSpec&, const ObservableSpec&) = default;
};

struct TruncationPolicy {
  double tol = 1e-12;
  int max_terms = 200;

  friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

/// A certified (map, observable) pair plus the series truncation it implies.
/// Immutable once built; share freely between threads.
class SystemHandle {
 public:
  /// Certifies expansion (NotExpanding) and sizes the alpha series from the
  /// geometric tail bound sup|v| b^{-N} / (b - 1) <= tol (ConfigError if
  /// that needs more than policy.max_terms terms).
  SystemHandle(CircleMapSpec map, ObservableSpec observable, TruncationPolicy policy = {}, double hoelder_eps = 0.5,
               int grid_size = kDefaultGridSize);

  const CircleMapSpec& map() const { return map_; }
  const ObservableSpec& observable() const { return observable_; }
  const DerivativeBounds& bounds() const { return bounds_; }
  const TruncationPolicy& policy() const { return policy_; }
  double hoelder_eps() const { return hoelder_eps_; }
  int series_terms() const { return terms_; }
  /// sup |v| used by the tail bound.
  double observable_bound() const { return v_bound_; }

  /// v and v' at x.
  Jet v_jet(double x) const;
  double v(double x) const;

  /// Same system with a different truncation policy.
  SystemHandle with_policy(TruncationPolicy policy) const;

 private:
  CircleMapSpec map_;
  ObservableSpec observable_;
  DerivativeBounds bounds_;
  TruncationPolicy policy_;
  double hoelder_eps_;
  double v_bound_ = 0.0;
  int terms_ = 0;
};

/// alpha(x) = -sum_{n>=1} v(f^{n-1} x) / Df^n(x), truncated per the policy.
double alpha(const SystemHandle& sys, double x);

/// v(x) - alpha(f(x)) + Df(x) alpha(x).
double cohomological_residual(const SystemHandle& sys, double x);

/// phi(x) = -(v'(x) + alpha(x) D^2 f(x)) / Df(x).
double phi(const SystemHandle& sys, double x);

/// The unique N >= 0 with |Df^N(x)| < 1/|h| <= |Df^{N+1}(x)|. Requires 0 < |h| < 1.
int stopping_time(const SystemHandle& sys, double x, double h);

/// sum_{i<n} phi(f^i x).
double birkhoff_sum_phi(const SystemHandle& sys, double x, int n);

/// Writes phi(f^i x) for i < out.size().
///
/// alpha is evaluated once at the end of the orbit segment and carried back
/// with alpha(x_i) = (alpha(x_{i+1}) - v(x_i)) / Df(x_i), which contracts
/// errors, so the cost is O(n + series_terms). With a dither generator each
/// forward step adds uniform noise in [-2^-40, 2^-40]; the result shadows a
/// true orbit, and orbits of maps such as x -> 2x no longer collapse to 0
/// once the mantissa is shifted out.
void phi_along_orbit(const SystemHandle& sys, double x, std::span<double> out, Rng* dither = nullptr);

/// alpha(x + h) - alpha(x).
double increment(const SystemHandle& sys, double x, double h);

/// (increment - h * S_{N(x,h)} phi(x)) / h.
double residual_ratio(const SystemHandle& sys, double x, double h);

/// alpha(x + h) + alpha(x - h) - 2 alpha(x). Requires 0 < |h| <= 1.
double second_difference(const SystemHandle& sys, double x, double h);
/// |second_difference| / |h|.
double zygmund_ratio(const SystemHandle& sys, double x, double h);
/// second_difference / |h|^{1 + eps}, eps = sys.hoelder_eps().
double omega_ratio(const SystemHandle& sys, double x, double h);

}  // namespace gwlab
