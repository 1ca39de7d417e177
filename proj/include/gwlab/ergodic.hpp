#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gwlab/dynamics.hpp"
#include "gwlab/numeric.hpp"
#include "gwlab/random.hpp"
#include "gwlab/weierstrass.hpp"

namespace gwlab {

/// Piecewise-constant invariant density on m equal cells of [0, 1).
struct UlamDensity {
  int m = 0;
  /// Cell probabilities, non-negative, summing to 1.
  std::vector<double> weights;
  /// L1 change of the last power-iteration step.
  double residual = 0.0;
  int iterations = 0;
  /// cdf[i] = weights[0] + ... + weights[i].
  std::vector<double> cdf;

  double density(int cell) const { return weights[cell] * m; }
  double left_endpoint(int cell) const { return static_cast<double>(cell) / m; }

  /// Normalises the given cell masses and builds the sampling table.
  static UlamDensity from_weights(std::vector<double> weights);
};

/// Sparse row-stochastic Ulam matrix: row i lists (j, P_ij).
struct UlamMatrix {
  int m = 0;
  std::vector<std::size_t> row_start;
  std::vector<int> cols;
  std::vector<double> vals;

  /// out = in * P (pushes a mass vector forward one step).
  void push_forward(std::span<const double> in, std::span<double> out) const;
};

struct UlamOptions {
  int m = 1 << 14;
  double tol = 1e-12;
  int max_iterations = 100000;
};

struct LyapunovResult {
  double L = 0.0;
  double ell = 0.0;
};

enum class VarianceMethod { green_kubo, birkhoff_mc };

std::string to_string(VarianceMethod method);

struct VarianceEstimate {
  double sigma2 = 0.0;
  double sigma = 0.0;
  VarianceMethod method = VarianceMethod::green_kubo;
  /// Lags used (green_kubo) or sample count (birkhoff_mc).
  long long terms_or_samples = 0;
  /// Per-lag correlations C(0), C(1), ... (green_kubo) or per-chunk means (birkhoff_mc).
  std::vector<double> diagnostics;
  /// Monte Carlo standard error of sigma2; zero for green_kubo.
  double standard_error = 0.0;
  /// green_kubo only: correlations had not decayed below term_tol by n_max.
  bool non_summable = false;
  int workers = 1;
};

struct GreenKuboOptions {
  int n_max = 64;
  double term_tol = 1e-10;
};

struct MonteCarloOptions {
  int n = 1000;
  long long samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Samples per independent random stream in Monte Carlo loops. Streams are
/// keyed by chunk index, so results do not depend on the worker count.
inline constexpr long long kChunkSize = 1000;

/// Ulam transition matrix with exact interval intersections on each cell.
UlamMatrix ulam_matrix(const CircleMapSpec& map, int m);

/// Stationary vector of the Ulam matrix by power iteration from the uniform
/// vector. Requires m a power of two >= 2^10; ConvergenceFailure past the cap.
UlamDensity invariant_density(const CircleMapSpec& map, const UlamOptions& options = {});

/// sum_i weights[i] * (mean of g over `sub_samples` midpoints of cell i).
template <std::invocable<double> Fn>
double integrate(const UlamDensity& rho, Fn&& g, int sub_samples = 4) {
  CompensatedSum total;
  const double width = 1.0 / rho.m;
  for (int i = 0; i < rho.m; ++i) {
    if (rho.weights[i] == 0.0) continue;
    double cell = 0.0;
    for (int s = 0; s < sub_samples; ++s) cell += g((i + (s + 0.5) / sub_samples) * width);
    total += rho.weights[i] * cell / sub_samples;
  }
  return total.value();
}

/// Same, from a precomputed table of per-cell averages.
double integrate(const UlamDensity& rho, std::span<const double> cell_means);

/// Per-cell averages of phi over `sub_samples` midpoints.
std::vector<double> phi_cell_means(const SystemHandle& sys, int m, int sub_samples = 4);

/// L = integral of log|Df| d mu, ell = 1/sqrt(L). DegenerateDynamics if L <= 0.
LyapunovResult lyapunov(const CircleMapSpec& map, const UlamDensity& rho);

/// Integral of phi against the density (zero in exact arithmetic).
double mean_phi(const SystemHandle& sys, const UlamDensity& rho);

/// sigma^2 = C(0) + 2 sum_{n>=1} C(n) with C(n) the lag-n correlation of the
/// centred phi under the Ulam chain. Stops after three consecutive
/// |C(n)| < term_tol.
VarianceEstimate variance_green_kubo(const SystemHandle& sys, const UlamDensity& rho, const UlamMatrix& matrix,
                                     const GreenKuboOptions& options = {});
VarianceEstimate variance_green_kubo(const SystemHandle& sys, const UlamDensity& rho,
                                     const GreenKuboOptions& options = {});

/// Mean over mu-distributed x of (S_n phi_hat(x))^2 / n. Requires n >= 100
/// and samples >= 10^4. Deterministic in the seed.
VarianceEstimate variance_birkhoff_mc(const SystemHandle& sys, const UlamDensity& rho,
                                      const MonteCarloOptions& options);

/// One draw from the piecewise-constant density: a cell by inverse CDF, then
/// a uniform point inside it.
double sample_mu(const UlamDensity& rho, Rng& rng);

/// Clamps tiny negative variances (roundoff) to zero.
double clamp_variance(double sigma2);

}  // namespace gwlab
