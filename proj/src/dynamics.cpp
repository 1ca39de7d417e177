#include "gwlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gwlab/errors.hpp"
#include "gwlab/numeric.hpp"

namespace gwlab {

namespace {

constexpr int kSolverIterations = 100;
// Orbit points this close below 1 are the point 0 seen from the other side.
constexpr double kSnapToZero = 1e-13;

double snap(double x) {
  double w = wrap01(x);
  return w > 1.0 - kSnapToZero ? 0.0 : w;
}

struct Candidate {
  double key;
  PeriodicOrbit orbit;
};

}  // namespace

void validate(const CircleMapSpec& spec) {
  if (spec.degree < 2) {
    throw ConfigError("map '" + spec.name + "': degree must be >= 2, got " + std::to_string(spec.degree));
  }
  for (const auto& h : spec.perturbation) {
    if (h.k < 1) throw ConfigError("map '" + spec.name + "': harmonic index must be >= 1");
    if (!std::isfinite(h.cos_coeff) || !std::isfinite(h.sin_coeff)) {
      throw ConfigError("map '" + spec.name + "': non-finite harmonic coefficient");
    }
  }
}

MapValue eval_map(const CircleMapSpec& spec, double x) {
  double g = 0.0, dg = 0.0, d2g = 0.0;
  for (const auto& h : spec.perturbation) {
    double t = kTwoPi * wrap01(static_cast<double>(h.k) * x);
    double c = std::cos(t);
    double s = std::sin(t);
    double w = kTwoPi * h.k;
    g += h.cos_coeff * c + h.sin_coeff * s;
    dg += w * (h.sin_coeff * c - h.cos_coeff * s);
    d2g -= w * w * (h.cos_coeff * c + h.sin_coeff * s);
  }
  return {spec.degree * x + g, spec.degree + dg, d2g};
}

DerivativeBounds derivative_bounds(const CircleMapSpec& spec, int grid_size) {
  validate(spec);
  if (grid_size < 1024) throw ConfigError("derivative_bounds: grid_size must be >= 1024");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < grid_size; ++i) {
    double df = eval_map(spec, static_cast<double>(i) / grid_size).df;
    lo = std::min(lo, df);
    hi = std::max(hi, df);
  }
  double margin = spec.perturbation_poly().second_derivative_sup_bound() / grid_size;
  DerivativeBounds bounds{lo - margin, hi + margin, grid_size};
  if (!(bounds.b > 1.0)) {
    throw NotExpanding("map '" + spec.name + "' is not expanding: certified inf Df = " + std::to_string(bounds.b) +
                       " <= 1");
  }
  return bounds;
}

double solve_lift(const CircleMapSpec& spec, double target, double lo, double hi) {
  double f_lo = eval_map(spec, lo).f;
  double f_hi = eval_map(spec, hi).f;
  if (target <= f_lo) return lo;
  if (target >= f_hi) return hi;
  double x = lo + (target - f_lo) / (f_hi - f_lo) * (hi - lo);
  for (int it = 0; it < kSolverIterations; ++it) {
    MapValue m = eval_map(spec, x);
    double r = m.f - target;
    if (r == 0.0) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - r / m.df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double scale = std::max(1.0, std::fabs(x));
    if (std::fabs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * scale ||
        hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * scale) {
      return next;
    }
    x = next;
  }
  throw ConvergenceFailure("solve_lift: no convergence for target " + std::to_string(target));
}

double lift_inverse(const CircleMapSpec& spec, double t) {
  // f(x + n) = f(x) + n d, so shift t into f([0, 1]) = [c, c + d].
  double c = eval_map(spec, 0.0).f;
  double n = std::floor((t - c) / spec.degree);
  double r = t - n * spec.degree;
  return n + solve_lift(spec, r, 0.0, 1.0);
}

std::vector<double> inverse_branches(const CircleMapSpec& spec, double y) {
  double c = eval_map(spec, 0.0).f;
  double first = std::ceil(c - y);
  std::vector<double> out;
  out.reserve(spec.degree);
  for (int i = 0; i < spec.degree; ++i) out.push_back(wrap01(lift_inverse(spec, y + first + i)));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PeriodicOrbit> periodic_orbits(const CircleMapSpec& spec, int p_max, const OrbitOptions& options) {
  validate(spec);
  if (p_max < 1 || p_max > 16) throw ConfigError("periodic_orbits: p_max must be in [1, 16]");
  const std::size_t d = static_cast<std::size_t>(spec.degree);
  std::size_t total_words = 0;
  std::size_t words = 1;
  for (int p = 1; p <= p_max; ++p) {
    words *= d;
    total_words += words;
    if (total_words > options.word_cap) {
      throw BudgetExceeded("periodic_orbits: " + std::to_string(spec.degree) + "^p words up to p = " +
                           std::to_string(p_max) + " exceed the cap of " + std::to_string(options.word_cap));
    }
  }

  // Branch i sends y to the preimage f^{-1}(y + base + i); the branches cover one lift period.
  const double base = std::floor(eval_map(spec, 0.0).f);
  auto branch = [&](int symbol, double y) { return lift_inverse(spec, y + base + symbol); };

  std::vector<PeriodicOrbit> result;
  std::vector<int> word;
  std::vector<double> chain;
  words = 1;
  for (int p = 1; p <= p_max; ++p) {
    words *= d;
    word.assign(p, 0);
    chain.assign(p + 1, 0.0);
    std::vector<Candidate> candidates;

    // chain[k] = B_{w_k}(chain[k+1]); f(chain[k]) = chain[k+1] + base + w_k.
    auto run_chain = [&](double y) {
      chain[p] = y;
      for (int k = p - 1; k >= 0; --k) chain[k] = branch(word[k], chain[k + 1]);
      return chain[0];
    };

    for (std::size_t w = 0; w < words; ++w) {
      std::size_t rest = w;
      for (int k = p - 1; k >= 0; --k) {
        word[k] = static_cast<int>(rest % d);
        rest /= d;
      }
      double y = 0.5;
      bool converged = false;
      for (int it = 0; it < options.max_iterations; ++it) {
        double next = run_chain(y);
        double step = std::fabs(next - y);
        y = next;
        if (step < options.step_tol) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        throw ConvergenceFailure("periodic_orbits: inverse-branch iteration did not converge at period " +
                                 std::to_string(p));
      }
      run_chain(y);

      std::vector<double> points(p);
      for (int k = 0; k < p; ++k) points[k] = snap(chain[k]);

      bool shorter = false;
      for (int q = 1; q < p && !shorter; ++q) {
        if (p % q == 0 && circle_distance(points[q], points[0]) < options.dedup_tol) shorter = true;
      }
      if (shorter) continue;

      int start = static_cast<int>(std::min_element(points.begin(), points.end()) - points.begin());
      PeriodicOrbit orbit{p, std::vector<double>(p), std::vector<int>(p)};
      for (int k = 0; k < p; ++k) {
        orbit.points[k] = points[(start + k) % p];
        orbit.word[k] = word[(start + k) % p];
      }
      candidates.push_back({orbit.points[0], std::move(orbit)});
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
    double last_key = -1.0;
    for (auto& c : candidates) {
      if (!result.empty() && result.back().period == p && c.key - last_key < options.dedup_tol) continue;
      last_key = c.key;
      result.push_back(std::move(c.orbit));
    }
  }
  return result;
}

}  // namespace gwlab
