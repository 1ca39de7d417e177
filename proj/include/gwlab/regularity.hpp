#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwlab/dynamics.hpp"
#include "gwlab/ergodic.hpp"
#include "gwlab/weierstrass.hpp"

namespace gwlab {

struct OrbitSum {
  PeriodicOrbit orbit;
  /// sum over one period of phi.
  double sum = 0.0;
};

struct OrbitSumReport {
  std::vector<OrbitSum> entries;
  double max_abs_sum = 0.0;
  int p_max = 0;
};

enum class Regularity { NowhereDifferentiable, C1plusEpsilon };

std::string to_string(Regularity r);

struct RegularityVerdict {
  Regularity verdict = Regularity::C1plusEpsilon;
  /// Lowest-period orbit (first in canonical order) with |sum| > orbit_tol.
  std::optional<OrbitSum> witness;
  double max_abs_sum = 0.0;
  double sigma2 = 0.0;
  double orbit_tol = 0.0;
  double sigma_tol = 0.0;
  int p_max = 0;
};

struct ClassifyOptions {
  int p_max = 8;
  double orbit_tol = 1e-8;
  double sigma_tol = 1e-6;
  GreenKuboOptions green_kubo;
  OrbitOptions orbits;
};

/// Default period bound: 8 for degree 2, 6 for degree 3, 4 above.
int default_p_max(int degree);

/// Smallest orbit_tol compatible with the truncation error carried by phi:
/// 10 p_max (1 + B) tol.
double orbit_tol_floor(const SystemHandle& sys, int p_max);

/// Periodic-orbit sums of phi for every orbit of period <= p_max. Periods 1
/// and 2 alone can miss a non-zero sum, so callers normally pass p_max >= 3.
OrbitSumReport orbit_sums(const SystemHandle& sys, int p_max, const OrbitOptions& orbits = {});

/// Decides alpha's regularity from orbit sums and checks the answer against
/// the Green-Kubo variance. Throws CriteriaDisagree when the two conflict and
/// ConfigError when orbit_tol is below orbit_tol_floor.
RegularityVerdict classify(const SystemHandle& sys, const UlamDensity& rho, const ClassifyOptions& options = {});

/// Same, reusing an already computed variance.
RegularityVerdict classify(const SystemHandle& sys, const VarianceEstimate& variance, const ClassifyOptions& options);

nlohmann::json to_json(const RegularityVerdict& verdict);

}  // namespace gwlab
