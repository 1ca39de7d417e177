#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "gwlab/dynamics.hpp"
#include "gwlab/presets.hpp"
#include "gwlab/random.hpp"
#include "gwlab/weierstrass.hpp"

namespace gwlab::test {

inline constexpr double kPi = std::numbers::pi;

inline CircleMapSpec linear_map(int d) { return CircleMapSpec{d, {}, "linear"}; }

inline CircleMapSpec sine_map(int d, double amp) { return CircleMapSpec{d, {Harmonic{1, 0.0, amp}}, "sine"}; }

inline ObservableSpec cosine_observable() { return ObservableSpec{0.0, {Harmonic{1, 1.0, 0.0}}, "cos", std::nullopt}; }

inline SystemHandle preset_system(const std::string& name) {
  const Preset& p = preset(name);
  return SystemHandle(p.map, p.observable);
}

/// Random trig polynomial with `terms` harmonics and coefficients in [-amp, amp].
inline TrigPoly random_trig_poly(Rng& rng, int terms, double amp) {
  TrigPoly p;
  p.mean = amp * (2.0 * uniform01(rng) - 1.0);
  for (int k = 1; k <= terms; ++k) {
    p.harmonics.push_back(Harmonic{k, amp * (2.0 * uniform01(rng) - 1.0), amp * (2.0 * uniform01(rng) - 1.0)});
  }
  return p;
}

}  // namespace gwlab::test
