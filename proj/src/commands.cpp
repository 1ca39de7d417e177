#include "gwlab/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "gwlab/clt.hpp"
#include "gwlab/csv.hpp"
#include "gwlab/ergodic.hpp"
#include "gwlab/errors.hpp"
#include "gwlab/regularity.hpp"
#include "gwlab/scans.hpp"

#ifndef GWLAB_VERSION
#define GWLAB_VERSION "unknown"
#endif

namespace gwlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path out_path(const RunConfig& c, const std::string& file) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / file;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

UlamDensity density_for(const RunConfig& c) {
  return invariant_density(c.map, UlamOptions{c.ulam.m, c.ulam.tol, c.ulam.max_iterations});
}

GreenKuboOptions gk_options(const RunConfig& c) { return {c.variance.n_max, c.variance.term_tol}; }

std::string timestamp_utc() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

}  // namespace

std::vector<std::string> cmd_eval(const RunConfig& c) {
  SystemHandle sys = c.system();
  std::vector<double> xs;
  if (c.eval.points) {
    xs = *c.eval.points;
  } else {
    if (c.eval.grid_exponent < 0 || c.eval.grid_exponent > 24) throw ConfigError("eval: grid_exponent must be in [0, 24]");
    const long long n = 1LL << c.eval.grid_exponent;
    xs.reserve(n);
    for (long long i = 0; i < n; ++i) xs.push_back(static_cast<double>(i) / static_cast<double>(n));
  }
  CsvWriter csv(out_path(c, "eval.csv"), {"x", "alpha", "phi"});
  for (double x : xs) csv.row({x, alpha(sys, x), phi(sys, x)});
  return {"eval.csv"};
}

std::vector<std::string> cmd_density(const RunConfig& c) {
  c.system();
  UlamDensity rho = density_for(c);
  CsvWriter csv(out_path(c, "density.csv"), {"cell_index", "left_endpoint", "weight", "density_value"});
  for (int i = 0; i < rho.m; ++i) csv.row({static_cast<long long>(i), rho.left_endpoint(i), rho.weights[i], rho.density(i)});
  return {"density.csv"};
}

std::vector<std::string> cmd_lyapunov(const RunConfig& c) {
  c.system();
  UlamDensity rho = density_for(c);
  LyapunovResult ly = lyapunov(c.map, rho);
  write_json(out_path(c, "lyapunov.json"),
             {{"L", ly.L}, {"ell", ly.ell}, {"m", rho.m}, {"ulam_iterations", rho.iterations}, {"ulam_residual", rho.residual}});
  return {"lyapunov.json"};
}

std::vector<std::string> cmd_variance(const RunConfig& c) {
  SystemHandle sys = c.system();
  const std::uint64_t seed = c.require_seed("variance");
  UlamDensity rho = density_for(c);
  VarianceEstimate gk = variance_green_kubo(sys, rho, gk_options(c));
  VarianceEstimate mc =
      variance_birkhoff_mc(sys, rho, MonteCarloOptions{c.variance.mc_n, c.variance.mc_samples, seed, c.workers});

  CsvWriter csv(out_path(c, "variance.csv"),
                {"method", "sigma2", "sigma", "terms_or_samples", "standard_error", "non_summable", "seed", "workers"});
  csv.row({to_string(gk.method), gk.sigma2, gk.sigma, gk.terms_or_samples, gk.standard_error,
           static_cast<long long>(gk.non_summable), std::string(""), static_cast<long long>(1)});
  csv.row({to_string(mc.method), mc.sigma2, mc.sigma, mc.terms_or_samples, mc.standard_error, 0LL,
           static_cast<long long>(seed), static_cast<long long>(mc.workers)});

  CsvWriter terms(out_path(c, "variance_terms.csv"), {"lag", "correlation"});
  for (std::size_t i = 0; i < gk.diagnostics.size(); ++i) terms.row({static_cast<long long>(i), gk.diagnostics[i]});
  return {"variance.csv", "variance_terms.csv"};
}

std::vector<std::string> cmd_classify(const RunConfig& c) {
  SystemHandle sys = c.system();
  ClassifyOptions opt;
  opt.p_max = c.classify.p_max.value_or(default_p_max(c.map.degree));
  opt.orbit_tol = c.classify.orbit_tol;
  opt.sigma_tol = c.classify.sigma_tol;
  opt.green_kubo = gk_options(c);
  if (opt.orbit_tol < orbit_tol_floor(sys, opt.p_max)) {
    throw ConfigError("classify: orbit_tol is below the truncation floor " + format_double(orbit_tol_floor(sys, opt.p_max)));
  }
  UlamDensity rho = density_for(c);
  RegularityVerdict v = classify(sys, rho, opt);
  write_json(out_path(c, "verdict.json"), to_json(v));
  return {"verdict.json"};
}

std::vector<std::string> cmd_clt(const RunConfig& c) {
  SystemHandle sys = c.system();
  const std::uint64_t seed = c.require_seed("clt");
  UlamDensity rho = density_for(c);
  VarianceEstimate gk = variance_green_kubo(sys, rho, gk_options(c));
  LyapunovResult ly = lyapunov(c.map, rho);
  CltOptions opt;
  opt.h_exponents = c.clt.h_exponents;
  opt.n_samples = c.clt.n_samples;
  opt.seed = seed;
  opt.workers = c.workers;
  opt.sigma_tol = c.classify.sigma_tol;
  std::vector<KSReport> reports = clt_experiment(sys, rho, gk, ly, opt);
  CsvWriter csv(out_path(c, "clt.csv"),
                {"h", "k", "n_samples", "ks_vs_normal", "ks_vs_birkhoff", "mean_y", "var_y", "seed"});
  for (const auto& r : reports) {
    csv.row({r.h, static_cast<long long>(r.k), r.n_samples, r.ks_vs_normal, r.ks_vs_birkhoff, r.mean_y, r.var_y,
             static_cast<long long>(r.seed)});
  }
  return {"clt.csv"};
}

std::vector<std::string> cmd_lil(const RunConfig& c) {
  SystemHandle sys = c.system();
  const std::uint64_t seed = c.require_seed("lil");
  UlamDensity rho = density_for(c);
  VarianceEstimate gk = variance_green_kubo(sys, rho, gk_options(c));
  LyapunovResult ly = lyapunov(c.map, rho);
  auto traces = lil_traces(sys, rho, gk, ly, c.lil.points, c.lil.k_min, c.lil.k_max, seed, c.classify.sigma_tol);
  CsvWriter csv(out_path(c, "lil.csv"), {"x", "k", "h", "R_k", "running_sup"});
  for (const auto& t : traces) {
    for (const auto& e : t.entries) csv.row({t.x, static_cast<long long>(e.k), e.h, e.R, e.running_sup});
  }
  return {"lil.csv"};
}

std::vector<std::string> cmd_zygmund(const RunConfig& c) {
  SystemHandle sys = c.system();
  const std::uint64_t seed = c.require_seed("zygmund");
  auto rows = zygmund_scan(sys, c.zygmund.k_min, c.zygmund.k_max, c.zygmund.points, seed, c.workers);
  CsvWriter csv(out_path(c, "zygmund.csv"),
                {"k", "h", "points", "max_zygmund_ratio", "mean_zygmund_ratio", "max_abs_omega_ratio"});
  for (const auto& r : rows) {
    csv.row({static_cast<long long>(r.k), r.h, static_cast<long long>(r.points), r.max_abs, r.mean_abs, r.max_abs_omega});
  }
  return {"zygmund.csv"};
}

std::vector<std::string> cmd_residual(const RunConfig& c) {
  SystemHandle sys = c.system();
  const std::uint64_t seed = c.require_seed("residual");
  auto rows = residual_scan(sys, c.residual.k_min, c.residual.k_max, c.residual.points, seed, c.workers);
  CsvWriter csv(out_path(c, "residual.csv"),
                {"k", "h", "points", "max_abs_residual_ratio", "mean_abs_residual_ratio"});
  for (const auto& r : rows) csv.row({static_cast<long long>(r.k), r.h, static_cast<long long>(r.points), r.max_abs, r.mean_abs});
  return {"residual.csv"};
}

void write_manifest(const RunConfig& c, const std::string& command, const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["config_hash"] = config_hash(c);
  m["tool_version"] = GWLAB_VERSION;
  m["timestamp"] = timestamp_utc();
  m["outputs"] = outputs;
  m["workers"] = c.workers;
  m["config"] = to_json(c);
  write_json(out_path(c, "manifest_" + command + ".json"), m);
}

namespace {

using Command = std::vector<std::string> (*)(const RunConfig&);

struct CommandEntry {
  const char* name;
  const char* help;
  Command fn;
};

const CommandEntry kCommands[] = {
    {"eval", "alpha and phi on a grid or at given points (eval.csv)", cmd_eval},
    {"density", "Ulam invariant density (density.csv)", cmd_density},
    {"lyapunov", "Lyapunov exponent L and ell = 1/sqrt(L) (lyapunov.json)", cmd_lyapunov},
    {"variance", "sigma^2(phi) by Green-Kubo and Birkhoff Monte Carlo (variance.csv)", cmd_variance},
    {"classify", "regularity verdict from periodic-orbit sums and sigma^2 (verdict.json)", cmd_classify},
    {"clt", "CLT experiment for the modulus of continuity (clt.csv)", cmd_clt},
    {"lil", "law-of-iterated-logarithm traces (lil.csv)", cmd_lil},
    {"zygmund", "per-scale maxima of the Zygmund ratio (zygmund.csv)", cmd_zygmund},
    {"residual", "per-scale maxima of the increment/Birkhoff residual (residual.csv)", cmd_residual},
};

std::vector<double> parse_points(const std::string& text) {
  std::vector<double> pts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      pts.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      throw ConfigError("eval: cannot parse point '" + item + "'");
    }
  }
  return pts;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for generalized Weierstrass functions of expanding circle maps", "gwlab"};
  app.require_subcommand(1, 1);

  std::optional<std::string> config_path, preset, out_dir, points;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers, grid_exp;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", preset, "built-in preset: classic, smooth, nonlinear, cubic");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for Monte Carlo commands");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "override a config field, e.g. --set ulam.m=16384 (repeatable)");

  bool show_config = false;
  auto* show = app.add_subcommand("show-config", "print the resolved configuration");
  show->callback([&] { show_config = true; });
  std::string chosen;
  for (const auto& entry : kCommands) {
    auto* sub = app.add_subcommand(entry.name, entry.help);
    sub->fallthrough();
    if (std::string(entry.name) == "eval") {
      sub->add_option("--grid-exp", grid_exp, "evaluate on 2^k uniform points");
      sub->add_option("--points", points, "comma-separated points (overrides the grid; may be empty)");
    }
  }
  show->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  for (auto* sub : app.get_subcommands()) chosen = sub->get_name();

  try {
    RunConfig config = resolve_config(config_path, preset, sets);
    if (out_dir) config.out_dir = *out_dir;
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    if (grid_exp) config.eval.grid_exponent = *grid_exp;
    if (points) config.eval.points = parse_points(*points);

    if (show_config) {
      out << to_json(config).dump(2) << '\n';
      return kOk;
    }
    for (const auto& entry : kCommands) {
      if (chosen != entry.name) continue;
      std::vector<std::string> outputs = entry.fn(config);
      write_manifest(config, chosen, outputs);
      for (const auto& f : outputs) out << "wrote " << (fs::path(config.out_dir) / f).string() << '\n';
      return kOk;
    }
    err << "error: unknown command '" << chosen << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ZeroVariance& e) {
    err << "error: " << e.what() << '\n';
    return kZeroVariance;
  } catch (const CriteriaDisagree& e) {
    err << "error: " << e.what() << '\n';
    return kCriteriaDisagree;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace gwlab::cli
