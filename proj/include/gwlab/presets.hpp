#pragma once

#include <string>
#include <vector>

#include "gwlab/dynamics.hpp"
#include "gwlab/weierstrass.hpp"

namespace gwlab {

struct Preset {
  std::string name;
  CircleMapSpec map;
  ObservableSpec observable;
};

/// classic: x -> 2x with v = cos 2 pi x (a Weierstrass cosine series).
/// smooth: x -> 2x with v = sin(4 pi x)/(2 pi) - sin(2 pi x)/pi, built so
///   that alpha = sin(2 pi x)/(2 pi).
/// nonlinear: x -> 2x + 0.1 sin 2 pi x with v = cos 2 pi x.
/// cubic: x -> 3x with v = cos 2 pi x.
const std::vector<Preset>& presets();

/// Throws ConfigError for unknown names.
const Preset& preset(const std::string& name);

}  // namespace gwlab
