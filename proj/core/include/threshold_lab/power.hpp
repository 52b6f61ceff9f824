#pragma once

// One-sided z-test sample size and the posterior-odds comparison between two
// (alpha, n) operating points.

#include <cstdint>

#include "threshold_lab/bayes.hpp"
#include "threshold_lab/binomial.hpp"

namespace threshold_lab {

/// Known-σ z-test of mu0 against mu_alt at level alpha with type-II rate at most beta.
class ZTestDesign {
 public:
  ZTestDesign(double mu0, double mu_alt, double sigma, double alpha, double beta);

  double mu0() const noexcept { return mu0_; }
  double mu_alt() const noexcept { return mu_alt_; }
  double sigma() const noexcept { return sigma_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double effect() const noexcept;  // |mu_alt - mu0|

 private:
  double mu0_;
  double mu_alt_;
  double sigma_;
  double alpha_;
  double beta_;
};

/// Φ(δ√n/σ − z_{1−α}).
double achieved_power(std::int64_t n, const ZTestDesign& design);

/// Smallest n with achieved_power(n) >= 1 − β. Starts from
/// ⌈((z_{1−α} + z_{1−β}) σ/δ)²⌉ and corrects by direct evaluation, so the
/// result is minimal with respect to achieved_power itself.
std::int64_t required_n(const ZTestDesign& design);

struct OperatingPoint {
  double alpha = 0.05;
  std::int64_t n = 1;
};

struct DiagnosticityGain {
  ThresholdEvidence at_a;
  ThresholdEvidence at_b;
  double odds_a = 1.0;  // posterior odds for H1 at point a
  double odds_b = 1.0;
  double ratio = 1.0;   // odds_b / odds_a
};

/// Posterior odds for H1 at the barely significant outcome of each point.
/// Propagates InfeasibleSelection.
DiagnosticityGain diagnosticity_gain(const OperatingPoint& a, const OperatingPoint& b,
                                     SelectionMode mode = SelectionMode::NearestToAlpha,
                                     const BetaPrior& prior = {},
                                     TailConvention tail = TailConvention::TwoSidedSymmetric);

}  // namespace threshold_lab
