#include "threshold_lab/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "threshold_lab/log_space.hpp"

namespace threshold_lab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln pmf(k) under θ = 0.5 with ln n! hoisted out of tail loops. term(k) and
// term(n-k) are bit-identical, which makes the two tails mirror images.
class NullTerms {
 public:
  explicit NullTerms(std::int64_t n)
      : n_(n),
        log_n_factorial_(log_gamma(static_cast<double>(n) + 1.0)),
        n_log_half_(-static_cast<double>(n) * std::numbers::ln2) {}

  double operator()(std::int64_t k) const {
    const std::int64_t m = std::min(k, n_ - k);
    if (m == 0) return n_log_half_;
    const auto md = static_cast<double>(m);
    const auto rest = static_cast<double>(n_ - m);
    return log_n_factorial_ - log_gamma(md + 1.0) - log_gamma(rest + 1.0) + n_log_half_;
  }

 private:
  std::int64_t n_;
  double log_n_factorial_;
  double n_log_half_;
};

void require_positive_n(std::int64_t n, const char* where) {
  if (n < 1) {
    throw std::invalid_argument(std::string(where) + ": n must be >= 1, got " + std::to_string(n));
  }
}

double clamp_log_probability(double lp) { return std::min(lp, 0.0); }

// Two-sided p for s > n/2 given ln P(X >= s); the lower tail is its mirror.
double two_sided_from_upper(double log_upper) { return clamp_log_probability(log_add_exp(log_upper, log_upper)); }

}  // namespace

BinomialOutcome::BinomialOutcome(std::int64_t n, std::int64_t s) : n_(n), s_(s) {
  if (n < 1) throw std::invalid_argument("BinomialOutcome: n must be >= 1, got " + std::to_string(n));
  if (s < 0 || s > n) {
    throw std::invalid_argument("BinomialOutcome: s must lie in [0, " + std::to_string(n) + "], got " +
                                std::to_string(s));
  }
}

BinomialModel::BinomialModel(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("BinomialModel: theta must lie in [0, 1], got " + std::to_string(theta));
  }
}

std::string_view to_string(TailConvention tail) noexcept {
  return tail == TailConvention::TwoSidedSymmetric ? "two" : "one";
}

std::string_view to_string(SelectionMode mode) noexcept {
  return mode == SelectionMode::NearestToAlpha ? "nearest" : "strict";
}

TailConvention parse_tail(std::string_view text) {
  if (text == "two" || text == "TwoSidedSymmetric") return TailConvention::TwoSidedSymmetric;
  if (text == "one" || text == "OneSidedUpper") return TailConvention::OneSidedUpper;
  throw std::invalid_argument("unknown tail convention '" + std::string(text) + "' (expected two|one)");
}

SelectionMode parse_mode(std::string_view text) {
  if (text == "nearest" || text == "NearestToAlpha") return SelectionMode::NearestToAlpha;
  if (text == "strict" || text == "StrictAtMostAlpha") return SelectionMode::StrictAtMostAlpha;
  throw std::invalid_argument("unknown selection mode '" + std::string(text) + "' (expected nearest|strict)");
}

namespace {

std::string infeasible_message(std::int64_t n, double alpha, double best_p) {
  std::ostringstream out;
  out << "no success count reaches alpha=" << alpha << " at n=" << n << " (smallest achievable p=" << best_p << ")";
  return out.str();
}

}  // namespace

InfeasibleSelection::InfeasibleSelection(std::int64_t n, double alpha, double best_p)
    : std::runtime_error(infeasible_message(n, alpha, best_p)), n_(n), alpha_(alpha), best_p_(best_p) {}

double log_pmf(const BinomialOutcome& outcome, const BinomialModel& model) {
  const std::int64_t n = outcome.n();
  const std::int64_t s = outcome.s();
  const double theta = model.theta();

  if (theta == 0.0) return s == 0 ? 0.0 : kNegInf;
  if (theta == 1.0) return s == n ? 0.0 : kNegInf;
  if (theta == 0.5) return NullTerms(n)(s);

  const auto sd = static_cast<double>(s);
  const auto fd = static_cast<double>(n - s);
  return log_choose(n, s) + sd * std::log(theta) + fd * std::log1p(-theta);
}

double log_upper_tail(std::int64_t n, std::int64_t k) {
  require_positive_n(n, "log_upper_tail");
  if (k <= 0) return 0.0;
  if (k > n) return kNegInf;
  const NullTerms term(n);
  double acc = kNegInf;
  for (std::int64_t j = n; j >= k; --j) acc = log_add_exp(acc, term(j));
  return clamp_log_probability(acc);
}

double log_lower_tail(std::int64_t n, std::int64_t k) {
  require_positive_n(n, "log_lower_tail");
  if (k < 0) return kNegInf;
  if (k >= n) return 0.0;
  const NullTerms term(n);
  double acc = kNegInf;
  for (std::int64_t j = 0; j <= k; ++j) acc = log_add_exp(acc, term(j));
  return clamp_log_probability(acc);
}

double log_p_value(const BinomialOutcome& outcome, TailConvention tail) {
  const std::int64_t n = outcome.n();
  const std::int64_t s = outcome.s();
  if (tail == TailConvention::OneSidedUpper) return log_upper_tail(n, s);

  const std::int64_t hi = std::max(s, n - s);
  const std::int64_t lo = std::min(s, n - s);
  if (hi == lo) return 0.0;
  return clamp_log_probability(log_add_exp(log_upper_tail(n, hi), log_lower_tail(n, lo)));
}

double p_value(const BinomialOutcome& outcome, TailConvention tail) {
  return std::exp(log_p_value(outcome, tail));
}

Selection select_barely_significant(std::int64_t n, double alpha, SelectionMode mode, TailConvention tail) {
  require_positive_n(n, "select_barely_significant");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("select_barely_significant: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }

  // Walk s from n toward n/2, growing ln P(X >= s) one term at a time. The
  // accumulation order matches log_upper_tail, so every p seen here equals
  // p_value({n, s}, tail) exactly. p grows as s shrinks; stop at the first
  // s whose p exceeds alpha.
  const NullTerms term(n);
  const std::int64_t s_min = n / 2 + 1;
  double acc = kNegInf;

  Selection at_most{};  // smallest s so far with p <= alpha
  bool have_at_most = false;

  for (std::int64_t s = n; s >= s_min; --s) {
    acc = log_add_exp(acc, term(s));
    const double log_upper = clamp_log_probability(acc);
    const double log_p = tail == TailConvention::OneSidedUpper ? log_upper : two_sided_from_upper(log_upper);
    const double p = std::exp(log_p);

    if (p <= alpha) {
      at_most = {s, p};
      have_at_most = true;
      continue;
    }
    if (!have_at_most) throw InfeasibleSelection(n, alpha, p);
    if (mode == SelectionMode::StrictAtMostAlpha) return at_most;

    const double over = p - alpha;
    const double under = alpha - at_most.p_achieved;
    return over < under ? Selection{s, p} : at_most;
  }
  return at_most;
}

}  // namespace threshold_lab
