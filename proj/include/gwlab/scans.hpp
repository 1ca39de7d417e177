#pragma once

#include <cstdint>
#include <vector>

#include "gwlab/weierstrass.hpp"

namespace gwlab {

/// Statistics of a ratio at one dyadic scale h = 2^-k over uniform random x.
struct ScaleMaximum {
  int k = 0;
  double h = 0.0;
  int points = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  /// zygmund_scan only: max |omega_ratio| at this scale.
  double max_abs_omega = 0.0;
};

/// Per-scale maxima of zygmund_ratio for k_min <= k <= k_max.
std::vector<ScaleMaximum> zygmund_scan(const SystemHandle& sys, int k_min, int k_max, int points, std::uint64_t seed,
                                       int workers = 1);

/// Per-scale maxima of |residual_ratio| for k_min <= k <= k_max.
std::vector<ScaleMaximum> residual_scan(const SystemHandle& sys, int k_min, int k_max, int points, std::uint64_t seed,
                                        int workers = 1);

}  // namespace gwlab
