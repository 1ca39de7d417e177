#include "gwlab/ergodic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "gwlab/errors.hpp"
#include "gwlab/parallel.hpp"

namespace gwlab {

std::string to_string(VarianceMethod method) {
  return method == VarianceMethod::green_kubo ? "green_kubo" : "birkhoff_mc";
}

double clamp_variance(double sigma2) {
  if (sigma2 < 0.0 && sigma2 >= -1e-9) return 0.0;
  return sigma2;
}

UlamDensity UlamDensity::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw ConfigError("density: no cells");
  CompensatedSum total;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("density: weights must be non-negative");
    total += w;
  }
  if (!(total.value() > 0.0)) throw ConfigError("density: weights sum to zero");
  UlamDensity rho;
  rho.m = static_cast<int>(weights.size());
  rho.weights = std::move(weights);
  const double inv = 1.0 / total.value();
  for (double& w : rho.weights) w *= inv;
  rho.cdf.resize(rho.weights.size());
  CompensatedSum running;
  for (std::size_t i = 0; i < rho.weights.size(); ++i) {
    running += rho.weights[i];
    rho.cdf[i] = running.value();
  }
  return rho;
}

void UlamMatrix::push_forward(std::span<const double> in, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i < m; ++i) {
    const double mass = in[i];
    if (mass == 0.0) continue;
    for (std::size_t e = row_start[i]; e < row_start[i + 1]; ++e) out[cols[e]] += mass * vals[e];
  }
}

UlamMatrix ulam_matrix(const CircleMapSpec& map, int m) {
  validate(map);
  if (m < 1024 || !std::has_single_bit(static_cast<unsigned>(m))) {
    throw ConfigError("ulam: m must be a power of two >= 1024, got " + std::to_string(m));
  }
  UlamMatrix P;
  P.m = m;
  P.row_start.reserve(m + 1);
  P.row_start.push_back(0);
  std::vector<double> cuts;
  for (int i = 0; i < m; ++i) {
    const double a = static_cast<double>(i) / m;
    const double b = static_cast<double>(i + 1) / m;
    const double fa = eval_map(map, a).f;
    const double fb = eval_map(map, b).f;
    // The lift is increasing, so [a, b] splits at the preimages of the cell
    // boundaries K/m inside (f(a), f(b)).
    const long long first = static_cast<long long>(std::floor(fa * m));
    const long long last = static_cast<long long>(std::ceil(fb * m)) - 1;
    cuts.assign(1, a);
    for (long long K = first + 1; K <= last; ++K) cuts.push_back(solve_lift(map, static_cast<double>(K) / m, a, b));
    cuts.push_back(b);
    const std::size_t row_begin = P.vals.size();
    double row_sum = 0.0;
    for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
      double frac = std::max(0.0, cuts[piece + 1] - cuts[piece]) * m;
      if (frac == 0.0) continue;
      long long K = first + static_cast<long long>(piece);
      P.cols.push_back(static_cast<int>(((K % m) + m) % m));
      P.vals.push_back(frac);
      row_sum += frac;
    }
    for (std::size_t e = row_begin; e < P.vals.size(); ++e) P.vals[e] /= row_sum;
    P.row_start.push_back(P.vals.size());
  }
  return P;
}

UlamDensity invariant_density(const CircleMapSpec& map, const UlamOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("ulam: tol must be > 0");
  derivative_bounds(map);
  UlamMatrix P = ulam_matrix(map, options.m);
  const int m = options.m;
  std::vector<double> mu(m, 1.0 / m), next(m);
  double change = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    P.push_forward(mu, next);
    CompensatedSum total;
    for (double w : next) total += w;
    const double inv = 1.0 / total.value();
    change = 0.0;
    for (int j = 0; j < m; ++j) {
      next[j] *= inv;
      change += std::fabs(next[j] - mu[j]);
    }
    mu.swap(next);
    if (change <= options.tol) {
      UlamDensity rho = UlamDensity::from_weights(std::move(mu));
      rho.residual = change;
      rho.iterations = it;
      return rho;
    }
  }
  throw ConvergenceFailure("ulam: power iteration did not reach tol " + std::to_string(options.tol) + " in " +
                           std::to_string(options.max_iterations) + " steps (last change " + std::to_string(change) +
                           ")");
}

double integrate(const UlamDensity& rho, std::span<const double> cell_means) {
  if (cell_means.size() != rho.weights.size()) throw ConfigError("integrate: table size does not match density");
  CompensatedSum total;
  for (std::size_t i = 0; i < cell_means.size(); ++i) total += rho.weights[i] * cell_means[i];
  return total.value();
}

std::vector<double> phi_cell_means(const SystemHandle& sys, int m, int sub_samples) {
  std::vector<double> means(m);
  const double width = 1.0 / m;
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int r = 0; r < sub_samples; ++r) s += phi(sys, (i + (r + 0.5) / sub_samples) * width);
    means[i] = s / sub_samples;
  }
  return means;
}

LyapunovResult lyapunov(const CircleMapSpec& map, const UlamDensity& rho) {
  double L = integrate(rho, [&](double x) { return std::log(std::fabs(eval_map(map, x).df)); });
  if (!(L > 0.0)) throw DegenerateDynamics("lyapunov: L = " + std::to_string(L) + " is not positive");
  return {L, 1.0 / std::sqrt(L)};
}

double mean_phi(const SystemHandle& sys, const UlamDensity& rho) {
  std::vector<double> means = phi_cell_means(sys, rho.m);
  return integrate(rho, means);
}

VarianceEstimate variance_green_kubo(const SystemHandle& sys, const UlamDensity& rho, const UlamMatrix& matrix,
                                     const GreenKuboOptions& options) {
  if (options.n_max < 1 || options.n_max > 100) throw ConfigError("green_kubo: n_max must be in [1, 100]");
  if (matrix.m != rho.m) throw ConfigError("green_kubo: matrix and density sizes differ");
  const int m = rho.m;
  std::vector<double> centred = phi_cell_means(sys, m);
  const double mean = integrate(rho, centred);
  for (double& a : centred) a -= mean;

  auto pair_with = [&](std::span<const double> mass) {
    CompensatedSum s;
    for (int j = 0; j < m; ++j) s += mass[j] * centred[j];
    return s.value();
  };

  std::vector<double> mass(m), next(m);
  for (int i = 0; i < m; ++i) mass[i] = rho.weights[i] * centred[i];

  VarianceEstimate est;
  est.method = VarianceMethod::green_kubo;
  const double c0 = pair_with(mass);
  est.diagnostics.push_back(c0);
  CompensatedSum sigma2;
  sigma2 += c0;
  int small_run = 0;
  int lag = 0;
  est.non_summable = true;
  while (lag < options.n_max) {
    ++lag;
    matrix.push_forward(mass, next);
    mass.swap(next);
    const double c = pair_with(mass);
    est.diagnostics.push_back(c);
    sigma2 += 2.0 * c;
    small_run = std::fabs(c) < options.term_tol ? small_run + 1 : 0;
    if (small_run >= 3) {
      est.non_summable = false;
      break;
    }
  }
  est.terms_or_samples = lag;
  est.sigma2 = clamp_variance(sigma2.value());
  est.sigma = std::sqrt(std::max(est.sigma2, 0.0));
  return est;
}

VarianceEstimate variance_green_kubo(const SystemHandle& sys, const UlamDensity& rho,
                                     const GreenKuboOptions& options) {
  return variance_green_kubo(sys, rho, ulam_matrix(sys.map(), rho.m), options);
}

VarianceEstimate variance_birkhoff_mc(const SystemHandle& sys, const UlamDensity& rho,
                                      const MonteCarloOptions& options) {
  if (options.n < 100) throw ConfigError("birkhoff_mc: n must be >= 100");
  if (options.samples < 10000) throw ConfigError("birkhoff_mc: samples must be >= 10^4");
  const double mean = mean_phi(sys, rho);
  const long long n_chunks = (options.samples + kChunkSize - 1) / kChunkSize;
  std::vector<double> chunk_sum(n_chunks), chunk_sq(n_chunks);
  const double inv_n = 1.0 / options.n;

  parallel_for(static_cast<std::size_t>(n_chunks), options.workers, [&](std::size_t c) {
    Rng rng = make_stream(options.seed, {0x6d63, c});
    const long long begin = static_cast<long long>(c) * kChunkSize;
    const long long end = std::min(options.samples, begin + kChunkSize);
    std::vector<double> values(options.n);
    CompensatedSum sum, sq;
    for (long long s = begin; s < end; ++s) {
      double x = sample_mu(rho, rng);
      phi_along_orbit(sys, x, values, &rng);
      CompensatedSum birkhoff;
      for (double p : values) birkhoff += p - mean;
      double val = birkhoff.value() * birkhoff.value() * inv_n;
      sum += val;
      sq += val * val;
    }
    chunk_sum[c] = sum.value();
    chunk_sq[c] = sq.value();
  });

  CompensatedSum sum, sq;
  VarianceEstimate est;
  est.method = VarianceMethod::birkhoff_mc;
  for (long long c = 0; c < n_chunks; ++c) {
    sum += chunk_sum[c];
    sq += chunk_sq[c];
    long long count = std::min(kChunkSize, options.samples - c * kChunkSize);
    est.diagnostics.push_back(chunk_sum[c] / count);
  }
  const double N = static_cast<double>(options.samples);
  const double m1 = sum.value() / N;
  const double var = std::max(0.0, (sq.value() - N * m1 * m1) / (N - 1.0));
  est.sigma2 = clamp_variance(m1);
  est.sigma = std::sqrt(std::max(est.sigma2, 0.0));
  est.terms_or_samples = options.samples;
  est.standard_error = std::sqrt(var / N);
  est.workers = options.workers;
  return est;
}

double sample_mu(const UlamDensity& rho, Rng& rng) {
  const double u = uniform01(rng) * rho.cdf.back();
  auto it = std::upper_bound(rho.cdf.begin(), rho.cdf.end(), u);
  int cell = static_cast<int>(std::min<std::ptrdiff_t>(it - rho.cdf.begin(), rho.m - 1));
  while (rho.weights[cell] == 0.0 && cell > 0) --cell;
  return (cell + uniform01(rng)) / rho.m;
}

}  // namespace gwlab
