#include "threshold_lab/replicability.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

#include "threshold_lab/gaussian.hpp"

namespace threshold_lab {

PrepReport p_rep(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("p_rep: p must lie in (0, 1), got " + std::to_string(p));
  }
  // Φ⁻¹(1 - p) = -Φ⁻¹(p); the second form avoids rounding 1 - p.
  const double z = -normal_quantile(p);
  PrepReport report;
  report.p_in = p;
  report.p_rep = normal_cdf(z / std::numbers::sqrt2);
  report.failure_prob = 1.0 - report.p_rep;
  return report;
}

}  // namespace threshold_lab
