#pragma once

// Point null θ = 0.5 against a Beta-smeared alternative.

#include <cstdint>

#include "threshold_lab/binomial.hpp"

namespace threshold_lab {

/// Beta(a, b) prior on θ under H1. Default is the uniform Beta(1, 1).
class BetaPrior {
 public:
  BetaPrior() = default;
  BetaPrior(double a, double b);

  static BetaPrior uniform() { return BetaPrior{}; }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  friend bool operator==(const BetaPrior&, const BetaPrior&) = default;

 private:
  double a_ = 1.0;
  double b_ = 1.0;
};

struct EvidenceReport {
  double log_l0 = 0.0;              // ln Pr(D | H0), θ = 0.5
  double log_l1 = 0.0;              // ln Pr(D | H1), marginal over the prior
  double log_bf01 = 0.0;            // log_l0 - log_l1
  double bf01 = 1.0;                // Pr(D | H0) / Pr(D | H1)
  double posterior_h0 = 0.5;        // Pr(H0 | D)
  double posterior_odds_h1 = 1.0;   // 1 / bf01
};

/// ln[C(n,s) B(s+a, n-s+b) / B(a,b)]. Equals -ln(n+1) exactly-in-form
/// for the uniform prior.
double log_marginal_h1(const BinomialOutcome& outcome, const BetaPrior& prior = {});

/// Posterior probability of H0 with prior probability prior_prob_h0 in (0, 1).
/// posterior_odds_h1 and bf01 do not depend on prior_prob_h0.
EvidenceReport posterior_h0(const BinomialOutcome& outcome, const BetaPrior& prior = {},
                            double prior_prob_h0 = 0.5);

struct ThresholdEvidence {
  std::int64_t n = 0;
  double alpha = 0.0;
  Selection selection;
  EvidenceReport evidence;
};

/// One point of the posterior-vs-N curve: pick the barely significant s for
/// (n, alpha), then evaluate posterior_h0 there. Propagates InfeasibleSelection.
ThresholdEvidence evidence_at_threshold(std::int64_t n, double alpha,
                                        SelectionMode mode = SelectionMode::NearestToAlpha,
                                        TailConvention tail = TailConvention::TwoSidedSymmetric,
                                        const BetaPrior& prior = {}, double prior_prob_h0 = 0.5);

}  // namespace threshold_lab
