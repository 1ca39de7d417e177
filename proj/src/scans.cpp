#include "gwlab/scans.hpp"

#include <cmath>

#include "gwlab/errors.hpp"
#include "gwlab/numeric.hpp"
#include "gwlab/parallel.hpp"
#include "gwlab/random.hpp"

namespace gwlab {

namespace {

template <class Ratio>
std::vector<ScaleMaximum> scan(int k_min, int k_max, int points, std::uint64_t seed, int workers, std::uint64_t tag,
                               bool strict_h, Ratio&& ratio) {
  if (k_min > k_max || k_min < (strict_h ? 1 : 0) || k_max > 52) throw ConfigError("scan: bad k range");
  if (points < 1) throw ConfigError("scan: points must be >= 1");
  std::vector<ScaleMaximum> out(static_cast<std::size_t>(k_max - k_min + 1));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    const int k = k_min + static_cast<int>(i);
    const double h = std::ldexp(1.0, -k);
    Rng rng = make_stream(seed, {tag, static_cast<std::uint64_t>(k)});
    ScaleMaximum s{k, h, points, 0.0, 0.0, 0.0};
    CompensatedSum total;
    for (int p = 0; p < points; ++p) {
      double x = uniform01(rng);
      double r = std::fabs(ratio(x, h, s));
      s.max_abs = std::max(s.max_abs, r);
      total += r;
    }
    s.mean_abs = total.value() / points;
    out[i] = s;
  });
  return out;
}

}  // namespace

std::vector<ScaleMaximum> zygmund_scan(const SystemHandle& sys, int k_min, int k_max, int points, std::uint64_t seed,
                                       int workers) {
  return scan(k_min, k_max, points, seed, workers, 0x7a7967, false, [&](double x, double h, ScaleMaximum& s) {
    double d2 = second_difference(sys, x, h);
    s.max_abs_omega = std::max(s.max_abs_omega, std::fabs(d2) / std::pow(h, 1.0 + sys.hoelder_eps()));
    return d2 / h;
  });
}

std::vector<ScaleMaximum> residual_scan(const SystemHandle& sys, int k_min, int k_max, int points, std::uint64_t seed,
                                        int workers) {
  return scan(k_min, k_max, points, seed, workers, 0x726573, true,
              [&](double x, double h, ScaleMaximum&) { return residual_ratio(sys, x, h); });
}

}  // namespace gwlab
