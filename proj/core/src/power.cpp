#include "threshold_lab/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "threshold_lab/gaussian.hpp"

namespace threshold_lab {

namespace {

void require_unit_open(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    throw std::invalid_argument(std::string("ZTestDesign: ") + name + " must lie in (0, 1), got " +
                                std::to_string(value));
  }
}

}  // namespace

ZTestDesign::ZTestDesign(double mu0, double mu_alt, double sigma, double alpha, double beta)
    : mu0_(mu0), mu_alt_(mu_alt), sigma_(sigma), alpha_(alpha), beta_(beta) {
  if (!std::isfinite(mu0) || !std::isfinite(mu_alt)) {
    throw std::invalid_argument("ZTestDesign: means must be finite");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("ZTestDesign: sigma must be positive, got " + std::to_string(sigma));
  }
  if (mu_alt == mu0) throw std::invalid_argument("ZTestDesign: mu_alt must differ from mu0");
  require_unit_open(alpha, "alpha");
  require_unit_open(beta, "beta");
}

double ZTestDesign::effect() const noexcept { return std::abs(mu_alt_ - mu0_); }

double achieved_power(std::int64_t n, const ZTestDesign& design) {
  if (n < 1) throw std::invalid_argument("achieved_power: n must be >= 1, got " + std::to_string(n));
  const double z_alpha = -normal_quantile(design.alpha());
  const double shift = design.effect() * std::sqrt(static_cast<double>(n)) / design.sigma();
  return normal_cdf(shift - z_alpha);
}

std::int64_t required_n(const ZTestDesign& design) {
  const double z_alpha = -normal_quantile(design.alpha());
  const double z_beta = -normal_quantile(design.beta());
  const double root = (z_alpha + z_beta) * design.sigma() / design.effect();
  const double estimate = std::ceil(root * root);
  if (!(estimate < static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2))) {
    throw std::invalid_argument("required_n: design needs an unrepresentable sample size");
  }

  const double target = 1.0 - design.beta();
  auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(estimate));
  while (n > 1 && achieved_power(n - 1, design) >= target) --n;
  while (achieved_power(n, design) < target) ++n;
  return n;
}

DiagnosticityGain diagnosticity_gain(const OperatingPoint& a, const OperatingPoint& b, SelectionMode mode,
                                     const BetaPrior& prior, TailConvention tail) {
  DiagnosticityGain gain;
  gain.at_a = evidence_at_threshold(a.n, a.alpha, mode, tail, prior);
  gain.at_b = evidence_at_threshold(b.n, b.alpha, mode, tail, prior);
  gain.odds_a = gain.at_a.evidence.posterior_odds_h1;
  gain.odds_b = gain.at_b.evidence.posterior_odds_h1;
  gain.ratio = gain.odds_b / gain.odds_a;
  return gain;
}

}  // namespace threshold_lab
