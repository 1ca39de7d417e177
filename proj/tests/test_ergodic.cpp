#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gwlab/clt.hpp"
#include "gwlab/ergodic.hpp"
#include "gwlab/errors.hpp"
#include "gwlab/numeric.hpp"
#include "helpers.hpp"

using namespace gwlab;
using gwlab::test::kPi;

namespace {

double l1_change(const UlamMatrix& P, const std::vector<double>& w) {
  std::vector<double> next(w.size());
  P.push_forward(w, next);
  double d = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) d += std::fabs(next[i] - w[i]);
  return d;
}

}  // namespace

TEST_CASE("Ulam density of linear maps is uniform") {
  for (int d : {2, 3}) {
    UlamDensity rho = invariant_density(test::linear_map(d), UlamOptions{4096, 1e-12, 100000});
    REQUIRE(rho.m == 4096);
    for (double w : rho.weights) CHECK(std::fabs(w - 1.0 / 4096) <= 1e-12);
    CHECK(rho.density(17) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Ulam matrix rows are stochastic and the density is stationary") {
  CircleMapSpec map = test::sine_map(2, 0.1);
  UlamMatrix P = ulam_matrix(map, 1 << 12);
  for (int i = 0; i < P.m; ++i) {
    double row = 0.0;
    for (std::size_t e = P.row_start[i]; e < P.row_start[i + 1]; ++e) {
      CHECK(P.vals[e] >= 0.0);
      row += P.vals[e];
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
  UlamDensity rho = invariant_density(map, UlamOptions{1 << 12, 1e-12, 100000});
  CHECK(rho.residual <= 1e-12);
  CHECK(std::accumulate(rho.weights.begin(), rho.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*std::min_element(rho.weights.begin(), rho.weights.end()) >= 0.0);
  CHECK(l1_change(P, rho.weights) <= 1e-12);
}

TEST_CASE("Ulam entries are exact interval fractions") {
  // Row i of x -> 2x covers cells 2i and 2i+1 (mod m) with mass 1/2 each.
  UlamMatrix P = ulam_matrix(test::linear_map(2), 1024);
  for (int i : {0, 5, 700, 1023}) {
    REQUIRE(P.row_start[i + 1] - P.row_start[i] == 2);
    for (std::size_t e = P.row_start[i]; e < P.row_start[i + 1]; ++e) {
      CHECK(P.vals[e] == doctest::Approx(0.5).epsilon(1e-14));
      CHECK((P.cols[e] == (2 * i) % 1024 || P.cols[e] == (2 * i + 1) % 1024));
    }
  }
}

TEST_CASE("invariant_density preconditions") {
  CHECK_THROWS_AS(invariant_density(test::linear_map(2), UlamOptions{512, 1e-12, 1000}), ConfigError);
  CHECK_THROWS_AS(invariant_density(test::linear_map(2), UlamOptions{3000, 1e-12, 1000}), ConfigError);
  CHECK_THROWS_AS(invariant_density(test::sine_map(2, 0.5), UlamOptions{1024, 1e-12, 1000}), NotExpanding);
  CHECK_THROWS_AS(invariant_density(test::sine_map(2, 0.1), UlamOptions{1 << 14, 1e-15, 3}), ConvergenceFailure);
}

TEST_CASE("integrate") {
  UlamDensity rho = invariant_density(test::linear_map(2), UlamOptions{4096, 1e-12, 100000});
  CHECK(integrate(rho, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(integrate(rho, [](double x) { return std::cos(2 * kPi * x); })) <= 1e-6);
  CHECK(std::fabs(integrate(rho, [](double x) { return std::pow(std::cos(2 * kPi * x), 2); }) - 0.5) <= 1e-6);
  std::vector<double> means(rho.m, 2.0);
  CHECK(integrate(rho, means) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Lyapunov exponents of linear maps") {
  for (int d : {2, 3}) {
    UlamDensity rho = invariant_density(test::linear_map(d), UlamOptions{4096, 1e-12, 100000});
    LyapunovResult ly = lyapunov(test::linear_map(d), rho);
    CHECK(std::fabs(ly.L - std::log(static_cast<double>(d))) <= 1e-9);
    CHECK(ly.ell * ly.ell * ly.L == doctest::Approx(1.0).epsilon(1e-12));
  }
  UlamDensity rho = invariant_density(test::linear_map(2), UlamOptions{4096, 1e-12, 100000});
  CHECK(lyapunov(test::linear_map(2), rho).ell == doctest::Approx(1.201122).epsilon(1e-6));
}

TEST_CASE("nonlinear preset: density and Lyapunov exponent against a long forward orbit") {
  const CircleMapSpec map = preset("nonlinear").map;
  UlamDensity rho = invariant_density(map, UlamOptions{1 << 14, 1e-12, 100000});
  LyapunovResult ly = lyapunov(map, rho);

  constexpr long long kSteps = 100'000'000;
  constexpr int kBins = 256;
  std::vector<long long> hist(kBins, 0);
  double x = 0.123456789;
  for (int i = 0; i < 1000; ++i) x = wrap01(eval_map(map, x).f);
  CompensatedSum log_sum;
  for (long long i = 0; i < kSteps; ++i) {
    MapValue mv = eval_map(map, x);
    log_sum += std::log(std::fabs(mv.df));
    hist[std::min(kBins - 1, static_cast<int>(x * kBins))] += 1;
    x = wrap01(mv.f);
  }
  CHECK(std::fabs(ly.L - log_sum.value() / kSteps) <= 1e-4);

  // Compared at 256 bins: at 2^14 bins the multinomial noise of 10^8 draws
  // alone is about 1e-2 in L1.
  const int per_bin = rho.m / kBins;
  double l1 = 0.0;
  for (int b = 0; b < kBins; ++b) {
    double w = 0.0;
    for (int i = 0; i < per_bin; ++i) w += rho.weights[b * per_bin + i];
    l1 += std::fabs(w - static_cast<double>(hist[b]) / kSteps);
  }
  CHECK(l1 <= 5e-3);
  double spread = *std::max_element(rho.weights.begin(), rho.weights.end()) /
                  *std::min_element(rho.weights.begin(), rho.weights.end());
  CHECK(spread > 1.1);
}

TEST_CASE("mean of phi vanishes") {
  for (const char* name : {"classic", "smooth"}) {
    SystemHandle sys = test::preset_system(name);
    UlamDensity rho = invariant_density(sys.map(), UlamOptions{1 << 14, 1e-12, 100000});
    CHECK(std::fabs(mean_phi(sys, rho)) <= 1e-8);
  }
  for (const char* name : {"nonlinear", "cubic"}) {
    SystemHandle sys = test::preset_system(name);
    UlamDensity rho = invariant_density(sys.map(), UlamOptions{1 << 14, 1e-12, 100000});
    CHECK(std::fabs(mean_phi(sys, rho)) <= 1e-5);
  }
}

TEST_CASE("Green-Kubo variance: closed forms") {
  SystemHandle classic = test::preset_system("classic");
  UlamDensity rho = invariant_density(classic.map(), UlamOptions{1 << 14, 1e-12, 100000});
  VarianceEstimate gk = variance_green_kubo(classic, rho);
  CHECK(std::fabs(gk.sigma2 - kPi * kPi / 2) <= 1e-4);
  CHECK(gk.sigma == doctest::Approx(2.221441).epsilon(1e-6));
  CHECK(gk.method == VarianceMethod::green_kubo);
  CHECK_FALSE(gk.non_summable);
  REQUIRE(gk.diagnostics.size() >= 4);
  for (std::size_t n = 1; n < gk.diagnostics.size(); ++n) CHECK(std::fabs(gk.diagnostics[n]) < 1e-8);

  SystemHandle smooth = test::preset_system("smooth");
  UlamDensity rho16 = invariant_density(smooth.map(), UlamOptions{1 << 16, 1e-12, 100000});
  VarianceEstimate z = variance_green_kubo(smooth, rho16);
  CHECK(z.sigma2 <= 1e-8);
  CHECK(z.sigma2 >= 0.0);
}

TEST_CASE("Green-Kubo flags slow decay") {
  SystemHandle nl = test::preset_system("nonlinear");
  UlamDensity rho = invariant_density(nl.map(), UlamOptions{1 << 12, 1e-12, 100000});
  VarianceEstimate gk = variance_green_kubo(nl, rho, GreenKuboOptions{2, 1e-30});
  CHECK(gk.non_summable);
  CHECK(gk.terms_or_samples == 2);
  CHECK_THROWS_AS(variance_green_kubo(nl, rho, GreenKuboOptions{101, 1e-10}), ConfigError);
}

TEST_CASE("Birkhoff Monte Carlo variance") {
  SystemHandle classic = test::preset_system("classic");
  UlamDensity rho = invariant_density(classic.map(), UlamOptions{1 << 12, 1e-12, 100000});
  VarianceEstimate a = variance_birkhoff_mc(classic, rho, MonteCarloOptions{1000, 10000, 1, 1});
  VarianceEstimate b = variance_birkhoff_mc(classic, rho, MonteCarloOptions{1000, 40000, 2, 1});
  CHECK(a.method == VarianceMethod::birkhoff_mc);
  CHECK(a.terms_or_samples == 10000);
  CHECK(std::fabs(a.sigma2 - kPi * kPi / 2) <= 3 * a.standard_error);
  CHECK(std::fabs(a.sigma2 - b.sigma2) <= 2 * std::hypot(a.standard_error, b.standard_error));

  SystemHandle smooth = test::preset_system("smooth");
  // S_n phi = u(x) - u(f^n x) with u = cos 2 pi x, so E[(S_n phi)^2] / n = 1/n.
  for (int n : {1000, 4000}) {
    VarianceEstimate z = variance_birkhoff_mc(smooth, rho, MonteCarloOptions{n, 10000, 1, 1});
    CHECK(std::fabs(z.sigma2 - 1.0 / n) <= 3 * z.standard_error);
  }

  CHECK_THROWS_AS(variance_birkhoff_mc(classic, rho, MonteCarloOptions{99, 10000, 1, 1}), ConfigError);
  CHECK_THROWS_AS(variance_birkhoff_mc(classic, rho, MonteCarloOptions{1000, 9999, 1, 1}), ConfigError);
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  SystemHandle nl = test::preset_system("nonlinear");
  UlamDensity rho = invariant_density(nl.map(), UlamOptions{1 << 12, 1e-12, 100000});
  VarianceEstimate one = variance_birkhoff_mc(nl, rho, MonteCarloOptions{200, 10000, 5, 1});
  VarianceEstimate three = variance_birkhoff_mc(nl, rho, MonteCarloOptions{200, 10000, 5, 3});
  CHECK(one.sigma2 == three.sigma2);
  CHECK(one.standard_error == three.standard_error);
  CHECK(one.diagnostics == three.diagnostics);
  CHECK(three.workers == 3);
}

TEST_CASE("sample_mu") {
  UlamDensity uniform = UlamDensity::from_weights(std::vector<double>(1024, 1.0));
  Rng rng = make_stream(8, {1});
  std::vector<double> draws(1'000'000);
  for (double& x : draws) x = sample_mu(uniform, rng);
  double ks = ks_statistic(EmpiricalCDF(draws), [](double y) { return std::clamp(y, 0.0, 1.0); });
  CHECK(ks <= 0.002);

  std::vector<double> spike(1024, 0.0);
  spike[300] = 1.0;
  UlamDensity one_cell = UlamDensity::from_weights(spike);
  for (int i = 0; i < 10000; ++i) {
    double x = sample_mu(one_cell, rng);
    CHECK(x >= 300.0 / 1024);
    CHECK(x < 301.0 / 1024);
  }

  Rng r1 = make_stream(42, {3}), r2 = make_stream(42, {3});
  for (int i = 0; i < 1000; ++i) CHECK(sample_mu(uniform, r1) == sample_mu(uniform, r2));
}

TEST_CASE("refinement stability") {
  for (const auto& p : presets()) {
    SystemHandle sys(p.map, p.observable);
    UlamDensity coarse = invariant_density(sys.map(), UlamOptions{1 << 14, 1e-12, 100000});
    UlamDensity fine = invariant_density(sys.map(), UlamOptions{1 << 15, 1e-12, 100000});
    CHECK(std::fabs(lyapunov(sys.map(), coarse).L - lyapunov(sys.map(), fine).L) <= 1e-4);
    double s_coarse = variance_green_kubo(sys, coarse).sigma2;
    double s_fine = variance_green_kubo(sys, fine).sigma2;
    if (p.name == "smooth") {
      CHECK(s_fine <= s_coarse);
      CHECK(s_fine <= 1e-7);
    } else {
      CHECK_MESSAGE(std::fabs(s_coarse - s_fine) <= 0.01 * s_fine, p.name);
    }
  }
}

TEST_CASE("clamp_variance") {
  CHECK(clamp_variance(-5e-10) == 0.0);
  CHECK(clamp_variance(-1e-8) == -1e-8);
  CHECK(clamp_variance(0.25) == 0.25);
}
