#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwlab/dynamics.hpp"
#include "gwlab/weierstrass.hpp"

namespace gwlab {

struct UlamSettings {
  int m = 1 << 16;
  double tol = 1e-12;
  int max_iterations = 100000;
  friend bool operator==(const UlamSettings&, const UlamSettings&) = default;
};

struct VarianceSettings {
  int n_max = 64;
  double term_tol = 1e-10;
  int mc_n = 1000;
  long long mc_samples = 100000;
  friend bool operator==(const VarianceSettings&, const VarianceSettings&) = default;
};

struct ClassifySettings {
  /// Unset means default_p_max(degree).
  std::optional<int> p_max;
  double orbit_tol = 1e-8;
  double sigma_tol = 1e-6;
  friend bool operator==(const ClassifySettings&, const ClassifySettings&) = default;
};

struct CltSettings {
  std::vector<int> h_exponents{8, 14, 20};
  long long n_samples = 100000;
  friend bool operator==(const CltSettings&, const CltSettings&) = default;
};

struct LilSettings {
  int points = 10;
  int k_min = 4;
  int k_max = 30;
  friend bool operator==(const LilSettings&, const LilSettings&) = default;
};

/// Per-scale scan over h = 2^-k, k_min..k_max, at `points` uniform random x.
struct ScanSettings {
  int k_min = 4;
  int k_max = 20;
  int points = 1000;
  friend bool operator==(const ScanSettings&, const ScanSettings&) = default;
};

struct EvalSettings {
  int grid_exponent = 10;
  /// When set (even empty), evaluate at these points instead of the grid.
  std::optional<std::vector<double>> points;
  friend bool operator==(const EvalSettings&, const EvalSettings&) = default;
};

struct RunConfig {
  std::string preset;
  CircleMapSpec map;
  ObservableSpec observable;
  TruncationPolicy truncation;
  double hoelder_eps = 0.5;
  UlamSettings ulam;
  VarianceSettings variance;
  ClassifySettings classify;
  CltSettings clt;
  LilSettings lil;
  ScanSettings zygmund{4, 20, 1000};
  ScanSettings residual{6, 24, 1000};
  EvalSettings eval;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  int workers = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  /// The seed, or ConfigError naming `command` when it is missing.
  std::uint64_t require_seed(const std::string& command) const;
  /// Certified system for this config (NotExpanding / ConfigError on bad input).
  SystemHandle system() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Strict parse: unknown keys and wrong types are ConfigErrors.
RunConfig config_from_json(const nlohmann::json& j);

/// Built-in preset as a full config document.
nlohmann::json preset_config(const std::string& name);

/// Resolves the effective config: the preset named by `preset_override`, else
/// by the file's "preset" key, else "classic"; then the file's fields are
/// merge-patched on top, then each "a.b.c=value" override in order.
RunConfig resolve_config(const std::optional<std::string>& config_path, const std::optional<std::string>& preset_override,
                         const std::vector<std::string>& overrides = {});

/// SHA-256 hex digest of the canonical (sorted-key, compact) config JSON.
std::string config_hash(const RunConfig& config);

}  // namespace gwlab
