#include "gwlab/presets.hpp"

#include <numbers>

#include "gwlab/errors.hpp"

namespace gwlab {

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    constexpr double pi = std::numbers::pi;
    ObservableSpec cosine{0.0, {{1, 1.0, 0.0}}, "cos", std::nullopt};
    std::vector<Preset> p;
    p.push_back({"classic", {2, {}, "doubling"}, cosine});
    p.push_back({"smooth",
                 {2, {}, "doubling"},
                 {0.0, {{1, 0.0, -1.0 / pi}, {2, 0.0, 1.0 / (2.0 * pi)}}, "coboundary", std::nullopt}});
    p.push_back({"nonlinear", {2, {{1, 0.0, 0.1}}, "doubling+0.1sin"}, cosine});
    p.push_back({"cubic", {3, {}, "tripling"}, cosine});
    return p;
  }();
  return all;
}

const Preset& preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + name + "' (known: classic, smooth, nonlinear, cubic)");
}

}  // namespace gwlab
