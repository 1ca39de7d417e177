#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gwlab/ergodic.hpp"
#include "gwlab/weierstrass.hpp"

namespace gwlab {

/// Standard normal CDF.
double normal_cdf(double y);

/// Right-continuous empirical distribution of a sample.
class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> samples);

  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }
  /// Fraction of samples <= y.
  double operator()(double y) const;

 private:
  std::vector<double> sorted_;
};

/// sup_i max(|i/n - F(x_(i))|, |(i-1)/n - F(x_(i))|) for a continuous F.
double ks_statistic(const EmpiricalCDF& samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance sup_y |F_a(y) - F_b(y)|.
double ks_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b);

struct IncrementSample {
  double x = 0.0;
  double h = 0.0;
  /// (alpha(x+h) - alpha(x)) / (sigma ell h sqrt(-log h)).
  double y = 0.0;
};

/// Normalised increment for one (x, h); h must lie in (0, 1/e).
IncrementSample increment_sample(const SystemHandle& sys, double sigma, const LyapunovResult& lyap, double x,
                                 double h);

struct KSReport {
  double h = 0.0;
  int k = 0;
  long long n_samples = 0;
  double ks_vs_normal = 0.0;
  double ks_vs_birkhoff = 0.0;
  double mean_y = 0.0;
  double var_y = 0.0;
  /// Birkhoff length round(-log h / L) used by the oracle sample.
  int birkhoff_length = 0;
  std::uint64_t seed = 0;
};

struct CltOptions {
  /// Scales h = 2^-k.
  std::vector<int> h_exponents{8, 14, 20};
  long long n_samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  double sigma_tol = 1e-6;
};

/// For each h: the law of the normalised increment over mu-random x, compared
/// with the standard normal and with the law of S_n phi / (sigma sqrt n),
/// n = round(-log h / L), over an independent mu-random sample. Throws
/// ZeroVariance when sigma^2 <= sigma_tol.
std::vector<KSReport> clt_experiment(const SystemHandle& sys, const UlamDensity& rho, const VarianceEstimate& sigma,
                                     const LyapunovResult& lyap, const CltOptions& options);

struct LILEntry {
  int k = 0;
  double h = 0.0;
  double R = 0.0;
  double running_sup = 0.0;
};

struct LILTrace {
  double x = 0.0;
  std::vector<LILEntry> entries;
  double sup_abs = 0.0;
  /// sigma(phi) ell, the theoretical limsup.
  double sigma_ell = 0.0;
};

/// R_k = (alpha(x+h) - alpha(x)) / (h sqrt(2 (-log h) log log(-log h))) for
/// h = 2^-k, k_min <= k <= k_max. Requires 4 <= k_min < k_max <= 40.
LILTrace lil_trace(const SystemHandle& sys, const VarianceEstimate& sigma, const LyapunovResult& lyap, double x,
                   int k_min, int k_max, double sigma_tol = 1e-6);

/// LIL traces at `points` mu-random points drawn from stream `seed`.
std::vector<LILTrace> lil_traces(const SystemHandle& sys, const UlamDensity& rho, const VarianceEstimate& sigma,
                                 const LyapunovResult& lyap, int points, int k_min, int k_max, std::uint64_t seed,
                                 double sigma_tol = 1e-6);

}  // namespace gwlab
