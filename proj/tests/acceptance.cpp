// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Artifacts go to the directory given as argv[1] (default
// ./acceptance_out).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gwlab/clt.hpp"
#include "gwlab/commands.hpp"
#include "gwlab/config.hpp"
#include "gwlab/errors.hpp"
#include "gwlab/presets.hpp"
#include "gwlab/regularity.hpp"
#include "gwlab/scans.hpp"

using namespace gwlab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d %s  %s:%s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.str().c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"gwlab"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) throw Error("gwlab " + args.back() + " exited " + std::to_string(code) + ": " + err.str());
  return code;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  if (!in) throw Error("missing " + p.string());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SystemHandle preset_system(const std::string& name) {
  const Preset& p = preset(name);
  return SystemHandle(p.map, p.observable);
}

const char* const kPresets[] = {"classic", "smooth", "nonlinear", "cubic"};

std::vector<std::string> run_args(const fs::path& dir, const std::string& preset_name, const std::string& command) {
  return {"--preset", preset_name, "--seed", std::to_string(kSeed), "--workers", "1", "--out", dir.string(), command};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::remove_all(root);
  const fs::path first = root / "run1", second = root / "run2";

  report(1, "classic alpha exact values and cohomological residual", [](Outcome& o) {
    auto t0 = Clock::now();
    SystemHandle sys = preset_system("classic");
    double e0 = std::fabs(alpha(sys, 0.0) + 1.0);
    double e5 = std::fabs(alpha(sys, 0.5));
    Rng rng = make_stream(kSeed, {1});
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) worst = std::max(worst, std::fabs(cohomological_residual(sys, uniform01(rng))));
    double t = seconds_since(t0);
    o.detail << " |alpha(0)+1| = " << e0 << ", |alpha(0.5)| = " << e5 << ", max residual = " << worst << ", " << t
             << " s";
    o.require(e0 <= 1e-12, "|alpha(0)+1| <= 1e-12");
    o.require(e5 <= 1e-12, "|alpha(0.5)| <= 1e-12");
    o.require(worst <= 3e-12, "residual <= 3e-12");
    o.require(t < 1.0, "runtime < 1 s");
  });

  report(2, "integral of phi against mu vanishes", [](Outcome& o) {
    auto t0 = Clock::now();
    for (const char* name : {"classic", "smooth", "nonlinear"}) {
      SystemHandle sys = preset_system(name);
      UlamDensity rho = invariant_density(sys.map(), UlamOptions{1 << 14, 1e-12, 100000});
      double m = std::fabs(mean_phi(sys, rho));
      double tol = std::string(name) == "nonlinear" ? 1e-5 : 1e-8;
      o.detail << " " << name << " " << m;
      o.require(m <= tol, std::string(name) + " <= " + std::to_string(tol));
    }
    double t = seconds_since(t0);
    o.require(t < 30.0, "runtime < 30 s");
  });

  report(3, "variance: closed form, estimator agreement, zero for the coboundary", [&](Outcome& o) {
    auto t0 = Clock::now();
    for (const char* name : kPresets) {
      fs::path dir = first / name;
      run_cli(run_args(dir, name, "variance"));
      auto rows = read_csv(dir / "variance.csv");
      double gk = std::stod(rows.at(0).at(1));
      double mc = std::stod(rows.at(1).at(1));
      double se = std::stod(rows.at(1).at(4));
      o.detail << " " << name << " gk=" << gk << " mc=" << mc << "+-" << se;
      if (std::string(name) == "smooth") {
        o.require(gk <= 1e-8, "smooth sigma^2 <= 1e-8");
        RunConfig cfg = resolve_config(std::nullopt, std::string(name), {});
        o.detail << " (mc * n = " << mc * cfg.variance.mc_n << ")";
        o.require(std::fabs(gk - mc) <= std::max(0.02 * std::fabs(gk), 3 * se), "smooth gk vs mc");
      } else {
        o.require(std::fabs(gk - mc) <= std::max(0.02 * gk, 3 * se), std::string(name) + " gk vs mc");
      }
      if (std::string(name) == "classic") o.require(std::fabs(gk - kPi * kPi / 2) <= 1e-4, "classic pi^2/2 within 1e-4");
    }
    double t = seconds_since(t0);
    o.require(t < 120.0, "runtime < 2 min");
  });

  report(4, "regularity dichotomy", [](Outcome& o) {
    auto density = [](const SystemHandle& sys) {
      return invariant_density(sys.map(), UlamOptions{1 << 16, 1e-12, 100000});
    };
    auto options = [](const SystemHandle& sys) {
      ClassifyOptions c;
      c.p_max = default_p_max(sys.map().degree);
      return c;
    };
    int disagreements = 0;
    auto classify_counted = [&](const SystemHandle& sys) -> std::optional<RegularityVerdict> {
      try {
        return classify(sys, density(sys), options(sys));
      } catch (const CriteriaDisagree& e) {
        ++disagreements;
        o.detail << " (" << e.what() << ")";
        return std::nullopt;
      }
    };

    SystemHandle classic = preset_system("classic");
    auto vc = classify_counted(classic);
    const double closed = kPi * std::sqrt(7.0) / 2;
    if (vc) {
      o.require(vc->verdict == Regularity::NowhereDifferentiable, "classic nowhere differentiable");
      o.require(vc->witness && vc->witness->orbit.period == 3, "classic witness period 3");
      if (vc->witness) {
        o.detail << " classic witness sum " << vc->witness->sum;
        o.require(std::fabs(std::fabs(vc->witness->sum) - closed) <= 1e-6, "witness sum pi sqrt(7)/2 within 1e-6");
      }
    }
    auto vn = classify_counted(preset_system("nonlinear"));
    if (vn) o.require(vn->verdict == Regularity::NowhereDifferentiable, "nonlinear nowhere differentiable");
    auto vs = classify_counted(preset_system("smooth"));
    if (vs) {
      o.require(vs->verdict == Regularity::C1plusEpsilon, "smooth C^{1+eps}");
      o.detail << ", smooth sigma^2 " << vs->sigma2;
    }

    Rng rng = make_stream(kSeed, {4});
    double worst_sum = 0.0, worst_sigma2 = 0.0;
    int smooth_count = 0;
    for (int trial = 0; trial < 20; ++trial) {
      TrigPoly a0;
      a0.mean = 0.4 * uniform01(rng) - 0.2;
      int terms = 1 + trial % 3;
      for (int k = 1; k <= terms; ++k) a0.harmonics.push_back({k, 0.4 * uniform01(rng) - 0.2, 0.4 * uniform01(rng) - 0.2});
      int d = 2 + trial % 2;
      CircleMapSpec map{d, {{1 + trial % 2, 0.05 * uniform01(rng), 0.05 * uniform01(rng)}}, "random"};
      SystemHandle sys(map, ObservableSpec{0.0, {}, "coboundary", a0});
      OrbitSumReport r = orbit_sums(sys, default_p_max(d));
      worst_sum = std::max(worst_sum, r.max_abs_sum);
      auto v = classify_counted(sys);
      if (v) {
        worst_sigma2 = std::max(worst_sigma2, v->sigma2);
        if (v->verdict == Regularity::C1plusEpsilon) ++smooth_count;
      }
    }
    o.detail << ", coboundaries: " << smooth_count << "/20 smooth, max orbit sum " << worst_sum << ", max sigma^2 "
             << worst_sigma2 << ", disagreements " << disagreements;
    o.require(smooth_count == 20, "20/20 coboundaries C^{1+eps}");
    o.require(worst_sum <= 1e-9, "orbit sums <= 1e-9");
    o.require(worst_sigma2 <= 1e-6, "sigma^2 <= 1e-6");
    o.require(disagreements == 0, "no CriteriaDisagree");
  });

  report(5, "increment minus Birkhoff sum stays bounded across scales", [](Outcome& o) {
    auto t0 = Clock::now();
    for (const char* name : {"classic", "nonlinear"}) {
      auto rows = residual_scan(preset_system(name), 6, 24, 1000, kSeed);
      double hi = 0.0, lo = 1e300;
      for (const auto& r : rows) {
        hi = std::max(hi, r.max_abs);
        lo = std::min(lo, r.max_abs);
      }
      o.detail << " " << name << " max/min = " << hi << "/" << lo << " = " << hi / lo;
      o.require(hi / lo <= 4.0, std::string(name) + " ratio <= 4");
    }
    double t = seconds_since(t0);
    o.require(t < 120.0, "runtime < 2 min");
  });

  report(6, "Zygmund ratio bounded across scales", [](Outcome& o) {
    for (const char* name : kPresets) {
      auto rows = zygmund_scan(preset_system(name), 4, 20, 1000, kSeed);
      double peak = 0.0;
      for (const auto& r : rows) peak = std::max(peak, r.max_abs);
      double first_max = rows.front().max_abs, last_max = rows.back().max_abs;
      o.detail << " " << name << " first=" << first_max << " last=" << last_max << " sup=" << peak;
      o.require(std::isfinite(peak), std::string(name) + " finite");
      o.require(last_max <= 2 * first_max, std::string(name) + " last <= 2 first");
    }
  });

  report(7, "CLT for the modulus of continuity (classic)", [&](Outcome& o) {
    auto t0 = Clock::now();
    fs::path dir = first / "classic";
    run_cli(run_args(dir, "classic", "clt"));
    auto rows = read_csv(dir / "clt.csv");
    std::vector<double> ks_normal;
    for (const auto& r : rows) {
      ks_normal.push_back(std::stod(r.at(3)));
      o.detail << " k=" << r.at(1) << " ksN=" << std::stod(r.at(3)) << " ksB=" << std::stod(r.at(4));
    }
    o.require(rows.size() == 3 && rows.back().at(1) == "20", "scales 8, 14, 20");
    const auto& last = rows.back();
    double ksb = std::stod(last.at(4)), mean = std::stod(last.at(5)), var = std::stod(last.at(6));
    o.detail << "; at k=20 mean=" << mean << " var=" << var;
    o.require(std::stoll(last.at(2)) == 100000, "n_samples = 10^5");
    o.require(ksb <= 0.02, "ks_vs_birkhoff <= 0.02 at k=20");
    for (std::size_t i = 1; i < ks_normal.size(); ++i) {
      o.require(ks_normal[i] < ks_normal[i - 1], "ks_vs_normal strictly decreasing");
    }
    o.require(std::fabs(mean) <= 0.02, "|mean| <= 0.02");
    o.require(var >= 0.8 && var <= 1.2, "variance in [0.8, 1.2]");
    double t = seconds_since(t0);
    o.require(t < 300.0, "runtime < 5 min");
  });

  report(8, "LIL envelope (classic, 10 mu-random points, k in [4, 30])", [&](Outcome& o) {
    fs::path dir = first / "classic";
    run_cli(run_args(dir, "classic", "lil"));
    auto rows = read_csv(dir / "lil.csv");
    RunConfig cfg = resolve_config(std::nullopt, std::string("classic"), {});
    SystemHandle sys = cfg.system();
    UlamDensity rho = invariant_density(sys.map(), UlamOptions{cfg.ulam.m, cfg.ulam.tol, cfg.ulam.max_iterations});
    double envelope =
        2 * variance_green_kubo(sys, rho, GreenKuboOptions{cfg.variance.n_max, cfg.variance.term_tol}).sigma *
        lyapunov(sys.map(), rho).ell;
    std::vector<std::string> xs;
    std::vector<double> sup_by_point;
    bool positive = false, negative = false;
    double worst = 0.0, worst_fine = 0.0;
    int worst_k = 0, over = 0;
    for (const auto& r : rows) {
      if (xs.empty() || xs.back() != r.at(0)) {
        xs.push_back(r.at(0));
        sup_by_point.push_back(0.0);
      }
      double R = std::stod(r.at(3));
      positive |= R > 0;
      negative |= R < 0;
      sup_by_point.back() = std::max(sup_by_point.back(), std::fabs(R));
      if (std::fabs(R) > envelope) ++over;
      if (std::stoi(r.at(1)) >= 6) worst_fine = std::max(worst_fine, std::fabs(R));
      if (std::fabs(R) > worst) {
        worst = std::fabs(R);
        worst_k = std::stoi(r.at(1));
      }
    }
    int points_inside = static_cast<int>(
        std::count_if(sup_by_point.begin(), sup_by_point.end(), [&](double s) { return s <= envelope; }));
    o.detail << " 2 sigma ell = " << envelope << ", points within envelope " << points_inside << "/" << xs.size()
             << ", entries above it " << over << ", largest |R_k| = " << worst << " at k=" << worst_k
             << " (largest for k >= 6: " << worst_fine << ")"
             << ", signs +" << positive << " -" << negative;
    o.require(xs.size() == 10, "10 points");
    o.require(points_inside == static_cast<int>(xs.size()), "sup |R_k| <= 2 sigma ell at every point");
    o.require(positive && negative, "both signs occur");
  });

  report(9, "determinism of the variance, CLT and LIL artifacts", [&](Outcome& o) {
    std::vector<fs::path> files;
    for (const char* name : kPresets) {
      run_cli(run_args(second / name, name, "variance"));
      files.push_back(fs::path(name) / "variance.csv");
      files.push_back(fs::path(name) / "variance_terms.csv");
    }
    run_cli(run_args(second / "classic", "classic", "clt"));
    run_cli(run_args(second / "classic", "classic", "lil"));
    files.push_back(fs::path("classic") / "clt.csv");
    files.push_back(fs::path("classic") / "lil.csv");
    int identical = 0;
    for (const auto& f : files) {
      bool same = fs::exists(first / f) && slurp(first / f) == slurp(second / f);
      identical += same;
      o.require(same, f.string() + " identical");
    }
    o.detail << " " << identical << "/" << files.size() << " CSV files byte-identical";
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
