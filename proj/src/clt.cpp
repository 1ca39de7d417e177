#include "gwlab/clt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "gwlab/errors.hpp"
#include "gwlab/numeric.hpp"
#include "gwlab/parallel.hpp"

namespace gwlab {

double normal_cdf(double y) { return 0.5 * std::erfc(-y / std::numbers::sqrt2); }

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double y) const {
  if (sorted_.empty()) return 0.0;
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_statistic(const EmpiricalCDF& samples, const std::function<double(double)>& cdf) {
  const std::size_t n = samples.size();
  if (n == 0) throw ConfigError("ks_statistic: empty sample");
  const double dn = static_cast<double>(n);
  double d = 0.0;
  auto xs = samples.sorted();
  for (std::size_t i = 1; i <= n; ++i) {
    double F = cdf(xs[i - 1]);
    d = std::max({d, std::fabs(i / dn - F), std::fabs((i - 1) / dn - F)});
  }
  return d;
}

double ks_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  if (a.size() == 0 || b.size() == 0) throw ConfigError("ks_two_sample: empty sample");
  auto xa = a.sorted();
  auto xb = b.sorted();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    double y = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] <= y) ++i;
    while (j < xb.size() && xb[j] <= y) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return d;
}

namespace {

void require_variance(const VarianceEstimate& sigma, double sigma_tol, const char* what) {
  if (!(sigma.sigma2 > sigma_tol)) {
    std::ostringstream msg;
    msg << what << ": sigma^2(phi) = " << sigma.sigma2 << " <= " << sigma_tol;
    throw ZeroVariance(msg.str() +
                       "; the limit laws for the modulus of continuity require sigma(phi) != 0 (alpha is C^{1+eps} "
                       "here)");
  }
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s += x;
  const double n = static_cast<double>(xs.size());
  const double mean = s.value() / n;
  CompensatedSum q;
  for (double x : xs) q += (x - mean) * (x - mean);
  return {mean, xs.size() > 1 ? q.value() / (n - 1.0) : 0.0};
}

}  // namespace

IncrementSample increment_sample(const SystemHandle& sys, double sigma, const LyapunovResult& lyap, double x,
                                 double h) {
  if (!(h > 0.0 && h < std::exp(-1.0))) throw ConfigError("increment_sample: h must lie in (0, 1/e)");
  double scale = sigma * lyap.ell * h * std::sqrt(-std::log(h));
  return {x, h, increment(sys, x, h) / scale};
}

std::vector<KSReport> clt_experiment(const SystemHandle& sys, const UlamDensity& rho, const VarianceEstimate& sigma,
                                     const LyapunovResult& lyap, const CltOptions& options) {
  require_variance(sigma, options.sigma_tol, "clt_experiment");
  if (options.n_samples < 1) throw ConfigError("clt_experiment: n_samples must be >= 1");
  const long long n = options.n_samples;
  const long long n_chunks = (n + kChunkSize - 1) / kChunkSize;

  std::vector<KSReport> reports;
  for (std::size_t hi = 0; hi < options.h_exponents.size(); ++hi) {
    const int k = options.h_exponents[hi];
    if (k < 2 || k > 60) throw ConfigError("clt_experiment: h = 2^-k needs 2 <= k <= 60");
    const double h = std::ldexp(1.0, -k);
    const int length = std::max(1, static_cast<int>(std::lround(-std::log(h) / lyap.L)));
    const double birkhoff_scale = 1.0 / (sigma.sigma * std::sqrt(static_cast<double>(length)));

    std::vector<double> ys(n), zs(n);
    parallel_for(static_cast<std::size_t>(n_chunks), options.workers, [&](std::size_t c) {
      Rng inc_rng = make_stream(options.seed, {0x636c74, hi, 0, c});
      Rng orb_rng = make_stream(options.seed, {0x636c74, hi, 1, c});
      const long long begin = static_cast<long long>(c) * kChunkSize;
      const long long end = std::min(n, begin + kChunkSize);
      for (long long s = begin; s < end; ++s) {
        ys[s] = increment_sample(sys, sigma.sigma, lyap, sample_mu(rho, inc_rng), h).y;
        zs[s] = birkhoff_sum_phi(sys, sample_mu(rho, orb_rng), length) * birkhoff_scale;
      }
    });

    Moments my = moments(ys);
    EmpiricalCDF fy(std::move(ys));
    EmpiricalCDF fz(std::move(zs));
    KSReport r;
    r.h = h;
    r.k = k;
    r.n_samples = n;
    r.ks_vs_normal = ks_statistic(fy, normal_cdf);
    r.ks_vs_birkhoff = ks_two_sample(fy, fz);
    r.mean_y = my.mean;
    r.var_y = my.var;
    r.birkhoff_length = length;
    r.seed = options.seed;
    reports.push_back(r);
  }
  return reports;
}

LILTrace lil_trace(const SystemHandle& sys, const VarianceEstimate& sigma, const LyapunovResult& lyap, double x,
                   int k_min, int k_max, double sigma_tol) {
  require_variance(sigma, sigma_tol, "lil_trace");
  if (!(4 <= k_min && k_min < k_max && k_max <= 40)) throw ConfigError("lil_trace: need 4 <= k_min < k_max <= 40");
  LILTrace trace;
  trace.x = x;
  trace.sigma_ell = sigma.sigma * lyap.ell;
  for (int k = k_min; k <= k_max; ++k) {
    const double h = std::ldexp(1.0, -k);
    const double log_inv_h = -std::log(h);
    const double denom = h * std::sqrt(2.0 * log_inv_h * std::log(std::log(log_inv_h)));
    const double R = increment(sys, x, h) / denom;
    trace.sup_abs = std::max(trace.sup_abs, std::fabs(R));
    trace.entries.push_back({k, h, R, trace.sup_abs});
  }
  return trace;
}

std::vector<LILTrace> lil_traces(const SystemHandle& sys, const UlamDensity& rho, const VarianceEstimate& sigma,
                                 const LyapunovResult& lyap, int points, int k_min, int k_max, std::uint64_t seed,
                                 double sigma_tol) {
  require_variance(sigma, sigma_tol, "lil_trace");
  Rng rng = make_stream(seed, {0x6c696c});
  std::vector<LILTrace> traces;
  for (int i = 0; i < points; ++i) traces.push_back(lil_trace(sys, sigma, lyap, sample_mu(rho, rng), k_min, k_max, sigma_tol));
  return traces;
}

}  // namespace gwlab
