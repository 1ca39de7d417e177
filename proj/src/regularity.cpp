#include "gwlab/regularity.hpp"

#include <cmath>
#include <sstream>

#include "gwlab/errors.hpp"
#include "gwlab/numeric.hpp"

namespace gwlab {

std::string to_string(Regularity r) {
  return r == Regularity::NowhereDifferentiable ? "NowhereDifferentiable" : "C1plusEpsilon";
}

int default_p_max(int degree) {
  if (degree <= 2) return 8;
  if (degree == 3) return 6;
  return 4;
}

double orbit_tol_floor(const SystemHandle& sys, int p_max) {
  return 10.0 * p_max * (1.0 + sys.bounds().B) * sys.policy().tol;
}

OrbitSumReport orbit_sums(const SystemHandle& sys, int p_max, const OrbitOptions& orbits) {
  OrbitSumReport report;
  report.p_max = p_max;
  for (auto& orbit : periodic_orbits(sys.map(), p_max, orbits)) {
    CompensatedSum s;
    for (double x : orbit.points) s += phi(sys, x);
    double sum = s.value();
    report.max_abs_sum = std::max(report.max_abs_sum, std::fabs(sum));
    report.entries.push_back({std::move(orbit), sum});
  }
  return report;
}

RegularityVerdict classify(const SystemHandle& sys, const VarianceEstimate& variance, const ClassifyOptions& options) {
  if (options.orbit_tol < orbit_tol_floor(sys, options.p_max)) {
    std::ostringstream msg;
    msg << "classify: orbit_tol " << options.orbit_tol << " is below the truncation floor "
        << orbit_tol_floor(sys, options.p_max);
    throw ConfigError(msg.str());
  }
  if (!(options.sigma_tol > 0.0)) throw ConfigError("classify: sigma_tol must be > 0");

  OrbitSumReport report = orbit_sums(sys, options.p_max, options.orbits);
  RegularityVerdict v;
  v.max_abs_sum = report.max_abs_sum;
  v.sigma2 = variance.sigma2;
  v.orbit_tol = options.orbit_tol;
  v.sigma_tol = options.sigma_tol;
  v.p_max = options.p_max;

  const bool orbit_says_rough = report.max_abs_sum > options.orbit_tol;
  const bool variance_says_rough = variance.sigma2 > options.sigma_tol;
  if (orbit_says_rough != variance_says_rough) {
    std::ostringstream msg;
    msg << "classify: periodic-orbit criterion (max |sum| = " << report.max_abs_sum << ", tol " << options.orbit_tol
        << ", p_max " << options.p_max << ") and variance criterion (sigma^2 = " << variance.sigma2 << ", tol "
        << options.sigma_tol << ") disagree; raise p_max or revisit the tolerances";
    throw CriteriaDisagree(msg.str());
  }
  if (orbit_says_rough) {
    v.verdict = Regularity::NowhereDifferentiable;
    for (auto& e : report.entries) {
      if (std::fabs(e.sum) > options.orbit_tol) {
        v.witness = std::move(e);
        break;
      }
    }
  } else {
    v.verdict = Regularity::C1plusEpsilon;
  }
  return v;
}

RegularityVerdict classify(const SystemHandle& sys, const UlamDensity& rho, const ClassifyOptions& options) {
  return classify(sys, variance_green_kubo(sys, rho, options.green_kubo), options);
}

nlohmann::json to_json(const RegularityVerdict& v) {
  nlohmann::json j;
  j["verdict"] = to_string(v.verdict);
  if (v.witness) {
    j["witness_points"] = v.witness->orbit.points;
    j["witness_period"] = v.witness->orbit.period;
    j["witness_sum"] = v.witness->sum;
  } else {
    j["witness_points"] = nlohmann::json::array();
    j["witness_period"] = nullptr;
    j["witness_sum"] = nullptr;
  }
  j["max_abs_sum"] = v.max_abs_sum;
  j["sigma2"] = v.sigma2;
  j["p_max"] = v.p_max;
  j["tolerances"] = {{"orbit_tol", v.orbit_tol}, {"sigma_tol", v.sigma_tol}};
  return j;
}

}  // namespace gwlab
