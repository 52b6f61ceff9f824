#include "threshold_lab/bayes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "threshold_lab/log_space.hpp"

namespace threshold_lab {

namespace {

// 1 / (1 + e^{-x}) without overflow in either direction.
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

BetaPrior::BetaPrior(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("BetaPrior: a must be positive and finite, got " + std::to_string(a));
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("BetaPrior: b must be positive and finite, got " + std::to_string(b));
  }
}

double log_marginal_h1(const BinomialOutcome& outcome, const BetaPrior& prior) {
  const auto n = static_cast<double>(outcome.n());
  const auto s = static_cast<double>(outcome.s());
  const double a = prior.a();
  const double b = prior.b();

  // ln C(n,s) + ln B(s+a, n-s+b) - ln B(a,b), regrouped into three
  // log-gamma ratios so the large ln Γ terms cancel analytically:
  //   [ln Γ(s+a) - ln Γ(s+1)] + [ln Γ(n-s+b) - ln Γ(n-s+1)]
  //   - [ln Γ(n+a+b) - ln Γ(n+1)] - ln B(a,b)
  const double success_part = log_gamma_ratio(s + 1.0, a - 1.0);
  const double failure_part = log_gamma_ratio(n - s + 1.0, b - 1.0);
  const double total_part = log_gamma_ratio(n + 1.0, a + b - 1.0);
  return success_part + failure_part - total_part - log_beta(a, b);
}

EvidenceReport posterior_h0(const BinomialOutcome& outcome, const BetaPrior& prior, double prior_prob_h0) {
  if (!(prior_prob_h0 > 0.0 && prior_prob_h0 < 1.0)) {
    throw std::invalid_argument("posterior_h0: prior probability of H0 must lie in (0, 1), got " +
                                std::to_string(prior_prob_h0));
  }

  EvidenceReport report;
  report.log_l0 = log_pmf(outcome, BinomialModel::null());
  report.log_l1 = log_marginal_h1(outcome, prior);
  report.log_bf01 = report.log_l0 - report.log_l1;
  report.bf01 = std::exp(report.log_bf01);
  report.posterior_odds_h1 = std::exp(-report.log_bf01);

  const double log_prior_odds_h0 = std::log(prior_prob_h0 / (1.0 - prior_prob_h0));
  report.posterior_h0 = logistic(log_prior_odds_h0 + report.log_bf01);
  return report;
}

ThresholdEvidence evidence_at_threshold(std::int64_t n, double alpha, SelectionMode mode, TailConvention tail,
                                        const BetaPrior& prior, double prior_prob_h0) {
  ThresholdEvidence out;
  out.n = n;
  out.alpha = alpha;
  out.selection = select_barely_significant(n, alpha, mode, tail);
  out.evidence = posterior_h0(BinomialOutcome{n, out.selection.s}, prior, prior_prob_h0);
  return out;
}

}  // namespace threshold_lab
