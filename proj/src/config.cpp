#include "gwlab/config.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <initializer_list>
#include <set>

#include "gwlab/errors.hpp"
#include "gwlab/presets.hpp"

namespace gwlab {

using nlohmann::json;

namespace {

void expect_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) throw ConfigError("config: unknown key '" + item.key() + "' in '" + where + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for '" + where + "." + key + "': " + e.what());
  }
}

json harmonics_to_json(const std::vector<Harmonic>& hs) {
  json a = json::array();
  for (const auto& h : hs) a.push_back({{"k", h.k}, {"cos", h.cos_coeff}, {"sin", h.sin_coeff}});
  return a;
}

std::vector<Harmonic> harmonics_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError("config: '" + where + "' must be an array");
  std::vector<Harmonic> out;
  for (const auto& item : j) {
    expect_object(item, where + "[]", {"k", "cos", "sin"});
    Harmonic h;
    read(item, "k", h.k, where);
    read(item, "cos", h.cos_coeff, where);
    read(item, "sin", h.sin_coeff, where);
    out.push_back(h);
  }
  return out;
}

json scan_to_json(const ScanSettings& s) { return {{"k_min", s.k_min}, {"k_max", s.k_max}, {"points", s.points}}; }

ScanSettings scan_from_json(const json& j, const std::string& where, ScanSettings s) {
  expect_object(j, where, {"k_min", "k_max", "points"});
  read(j, "k_min", s.k_min, where);
  read(j, "k_max", s.k_max, where);
  read(j, "points", s.points, where);
  return s;
}

}  // namespace

std::uint64_t RunConfig::require_seed(const std::string& command) const {
  if (!seed) throw ConfigError(command + ": a seed is required for Monte Carlo work (set \"seed\" or --seed)");
  return *seed;
}

SystemHandle RunConfig::system() const { return SystemHandle(map, observable, truncation, hoelder_eps); }

json to_json(const RunConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["map"] = {{"name", c.map.name}, {"degree", c.map.degree}, {"perturbation", harmonics_to_json(c.map.perturbation)}};
  json obs = {{"name", c.observable.name},
              {"mean", c.observable.mean_coeff},
              {"harmonics", harmonics_to_json(c.observable.harmonics)}};
  if (c.observable.coboundary_of) {
    obs["coboundary_of"] = {{"mean", c.observable.coboundary_of->mean},
                            {"harmonics", harmonics_to_json(c.observable.coboundary_of->harmonics)}};
  } else {
    obs["coboundary_of"] = nullptr;
  }
  j["observable"] = obs;
  j["truncation"] = {{"tol", c.truncation.tol}, {"max_terms", c.truncation.max_terms}};
  j["hoelder_eps"] = c.hoelder_eps;
  j["ulam"] = {{"m", c.ulam.m}, {"tol", c.ulam.tol}, {"max_iterations", c.ulam.max_iterations}};
  j["variance"] = {{"n_max", c.variance.n_max},
                   {"term_tol", c.variance.term_tol},
                   {"mc_n", c.variance.mc_n},
                   {"mc_samples", c.variance.mc_samples}};
  j["classify"] = {{"p_max", c.classify.p_max ? json(*c.classify.p_max) : json(nullptr)},
                   {"orbit_tol", c.classify.orbit_tol},
                   {"sigma_tol", c.classify.sigma_tol}};
  j["clt"] = {{"h_exponents", c.clt.h_exponents}, {"n_samples", c.clt.n_samples}};
  j["lil"] = {{"points", c.lil.points}, {"k_min", c.lil.k_min}, {"k_max", c.lil.k_max}};
  j["zygmund"] = scan_to_json(c.zygmund);
  j["residual"] = scan_to_json(c.residual);
  j["eval"] = {{"grid_exponent", c.eval.grid_exponent},
               {"points", c.eval.points ? json(*c.eval.points) : json(nullptr)}};
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["out_dir"] = c.out_dir;
  j["workers"] = c.workers;
  return j;
}

RunConfig config_from_json(const json& j) {
  expect_object(j, "config",
                {"preset", "map", "observable", "truncation", "hoelder_eps", "ulam", "variance", "classify", "clt",
                 "lil", "zygmund", "residual", "eval", "seed", "out_dir", "workers"});
  RunConfig c;
  read(j, "preset", c.preset, "config");
  if (j.contains("map")) {
    const json& m = j["map"];
    expect_object(m, "map", {"name", "degree", "perturbation"});
    read(m, "name", c.map.name, "map");
    read(m, "degree", c.map.degree, "map");
    if (m.contains("perturbation")) c.map.perturbation = harmonics_from_json(m["perturbation"], "map.perturbation");
  }
  if (j.contains("observable")) {
    const json& o = j["observable"];
    expect_object(o, "observable", {"name", "mean", "harmonics", "coboundary_of"});
    read(o, "name", c.observable.name, "observable");
    read(o, "mean", c.observable.mean_coeff, "observable");
    if (o.contains("harmonics")) c.observable.harmonics = harmonics_from_json(o["harmonics"], "observable.harmonics");
    if (o.contains("coboundary_of") && !o["coboundary_of"].is_null()) {
      const json& a = o["coboundary_of"];
      expect_object(a, "observable.coboundary_of", {"mean", "harmonics"});
      TrigPoly p;
      read(a, "mean", p.mean, "observable.coboundary_of");
      if (a.contains("harmonics")) p.harmonics = harmonics_from_json(a["harmonics"], "observable.coboundary_of.harmonics");
      c.observable.coboundary_of = p;
    }
  }
  if (j.contains("truncation")) {
    expect_object(j["truncation"], "truncation", {"tol", "max_terms"});
    read(j["truncation"], "tol", c.truncation.tol, "truncation");
    read(j["truncation"], "max_terms", c.truncation.max_terms, "truncation");
  }
  read(j, "hoelder_eps", c.hoelder_eps, "config");
  if (j.contains("ulam")) {
    expect_object(j["ulam"], "ulam", {"m", "tol", "max_iterations"});
    read(j["ulam"], "m", c.ulam.m, "ulam");
    read(j["ulam"], "tol", c.ulam.tol, "ulam");
    read(j["ulam"], "max_iterations", c.ulam.max_iterations, "ulam");
  }
  if (j.contains("variance")) {
    const json& v = j["variance"];
    expect_object(v, "variance", {"n_max", "term_tol", "mc_n", "mc_samples"});
    read(v, "n_max", c.variance.n_max, "variance");
    read(v, "term_tol", c.variance.term_tol, "variance");
    read(v, "mc_n", c.variance.mc_n, "variance");
    read(v, "mc_samples", c.variance.mc_samples, "variance");
  }
  if (j.contains("classify")) {
    const json& k = j["classify"];
    expect_object(k, "classify", {"p_max", "orbit_tol", "sigma_tol"});
    if (k.contains("p_max") && !k["p_max"].is_null()) {
      int p = 0;
      read(k, "p_max", p, "classify");
      c.classify.p_max = p;
    }
    read(k, "orbit_tol", c.classify.orbit_tol, "classify");
    read(k, "sigma_tol", c.classify.sigma_tol, "classify");
  }
  if (j.contains("clt")) {
    expect_object(j["clt"], "clt", {"h_exponents", "n_samples"});
    read(j["clt"], "h_exponents", c.clt.h_exponents, "clt");
    read(j["clt"], "n_samples", c.clt.n_samples, "clt");
  }
  if (j.contains("lil")) {
    expect_object(j["lil"], "lil", {"points", "k_min", "k_max"});
    read(j["lil"], "points", c.lil.points, "lil");
    read(j["lil"], "k_min", c.lil.k_min, "lil");
    read(j["lil"], "k_max", c.lil.k_max, "lil");
  }
  if (j.contains("zygmund")) c.zygmund = scan_from_json(j["zygmund"], "zygmund", c.zygmund);
  if (j.contains("residual")) c.residual = scan_from_json(j["residual"], "residual", c.residual);
  if (j.contains("eval")) {
    const json& e = j["eval"];
    expect_object(e, "eval", {"grid_exponent", "points"});
    read(e, "grid_exponent", c.eval.grid_exponent, "eval");
    if (e.contains("points") && !e["points"].is_null()) {
      std::vector<double> pts;
      read(e, "points", pts, "eval");
      c.eval.points = pts;
    }
  }
  if (j.contains("seed") && !j["seed"].is_null()) {
    std::uint64_t s = 0;
    read(j, "seed", s, "config");
    c.seed = s;
  }
  read(j, "out_dir", c.out_dir, "config");
  read(j, "workers", c.workers, "config");
  if (c.workers < 1) throw ConfigError("config: workers must be >= 1");
  return c;
}

json preset_config(const std::string& name) {
  const Preset& p = preset(name);
  RunConfig c;
  c.preset = p.name;
  c.map = p.map;
  c.observable = p.observable;
  c.seed = 1;
  return to_json(c);
}

RunConfig resolve_config(const std::optional<std::string>& config_path, const std::optional<std::string>& preset_override,
                         const std::vector<std::string>& overrides) {
  json file = json::object();
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw ConfigError("config: cannot open '" + *config_path + "'");
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config: '" + *config_path + "' is not valid JSON: " + e.what());
    }
    if (!file.is_object()) throw ConfigError("config: top level must be an object");
  }
  std::string name = "classic";
  if (preset_override) {
    name = *preset_override;
  } else if (file.contains("preset") && file["preset"].is_string()) {
    name = file["preset"].get<std::string>();
  }
  json merged = preset_config(name);
  merged.merge_patch(file);
  merged["preset"] = name;

  for (const auto& item : overrides) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + item + "' is not of the form key.path=value");
    std::string path = "/" + item.substr(0, eq);
    for (auto& ch : path) {
      if (ch == '.') ch = '/';
    }
    std::string text = item.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    merged[json::json_pointer(path)] = value;
  }
  return config_from_json(merged);
}

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json(config).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("config_hash: SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace gwlab
