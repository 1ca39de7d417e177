#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gwlab/trig.hpp"

namespace gwlab {

/// Degree-d lift f(x) = d x + g(x) of a circle map, g a trigonometric polynomial
/// without constant term.
struct CircleMapSpec {
  int degree = 2;
  std::vector<Harmonic> perturbation;
  std::string name;

  TrigPoly perturbation_poly() const { return TrigPoly{0.0, perturbation}; }

  friend bool operator==(const CircleMapSpec&, const CircleMapSpec&) = default;
};

/// f, Df and D^2 f at one point of the lift.
struct MapValue {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

/// Certified bounds b <= |Df| <= B.
struct DerivativeBounds {
  double b = 0.0;
  double B = 0.0;
  int grid_size = 0;
};

struct PeriodicOrbit {
  int period = 0;
  /// Orbit points in forward order, each in [0, 1), starting at the smallest.
  std::vector<double> points;
  /// Inverse-branch symbols that produced the orbit, rotated along with points.
  std::vector<int> word;
};

struct OrbitOptions {
  int max_iterations = 200;
  double step_tol = 1e-14;
  double dedup_tol = 1e-9;
  /// Cap on the total number of symbol words sum_p d^p.
  std::size_t word_cap = std::size_t{1} << 21;
};

inline constexpr int kDefaultGridSize = 1 << 16;

/// Throws ConfigError when the spec is malformed (degree < 2, k < 1).
void validate(const CircleMapSpec& spec);

MapValue eval_map(const CircleMapSpec& spec, double x);

/// Min/max of Df on a uniform grid widened by the Lipschitz margin
/// sum (2 pi k)^2 (|a_k| + |b_k|) / grid_size. Throws NotExpanding when b <= 1.
DerivativeBounds derivative_bounds(const CircleMapSpec& spec, int grid_size = kDefaultGridSize);

/// Solves f(x) = target for x in [lo, hi], given f(lo) <= target <= f(hi).
double solve_lift(const CircleMapSpec& spec, double target, double lo, double hi);

/// Global inverse of the lift: the unique real x with f(x) = t.
double lift_inverse(const CircleMapSpec& spec, double t);

/// The d preimages of y in [0, 1), in increasing order.
std::vector<double> inverse_branches(const CircleMapSpec& spec, double y);

/// Every periodic orbit of exact period p <= p_max, sorted by period and then
/// by smallest point.
std::vector<PeriodicOrbit> periodic_orbits(const CircleMapSpec& spec, int p_max, const OrbitOptions& options = {});

}  // namespace gwlab
