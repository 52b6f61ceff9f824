#pragma once

// Exact binomial probabilities and sign-test p-values under θ = 0.5.
//
// All probabilities are carried in log space. Tail sums start at the most
// extreme outcome and move inward so the smallest terms are added first.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace threshold_lab {

/// Data pair (n trials, s successes). Constructor enforces 1 <= n, 0 <= s <= n.
class BinomialOutcome {
 public:
  BinomialOutcome(std::int64_t n, std::int64_t s);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t s() const noexcept { return s_; }

  friend bool operator==(const BinomialOutcome&, const BinomialOutcome&) = default;

 private:
  std::int64_t n_;
  std::int64_t s_;
};

/// Success probability θ in [0, 1]. The null model is θ = 0.5.
class BinomialModel {
 public:
  explicit BinomialModel(double theta);

  static BinomialModel null() { return BinomialModel{0.5}; }

  double theta() const noexcept { return theta_; }

 private:
  double theta_;
};

enum class TailConvention {
  TwoSidedSymmetric,  // P(X >= max(s, n-s)) + P(X <= min(s, n-s))
  OneSidedUpper,      // P(X >= s)
};

enum class SelectionMode {
  NearestToAlpha,     // s minimising |p(s) - alpha|, ties to the smaller p
  StrictAtMostAlpha,  // smallest s with p(s) <= alpha
};

std::string_view to_string(TailConvention tail) noexcept;
std::string_view to_string(SelectionMode mode) noexcept;

/// Accepts "two"/"one" (also the enumerator names); throws std::invalid_argument.
TailConvention parse_tail(std::string_view text);
/// Accepts "nearest"/"strict" (also the enumerator names); throws std::invalid_argument.
SelectionMode parse_mode(std::string_view text);

/// Raised when no success count reaches the requested significance level.
class InfeasibleSelection : public std::runtime_error {
 public:
  InfeasibleSelection(std::int64_t n, double alpha, double best_p);

  std::int64_t n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  double best_p() const noexcept { return best_p_; }

 private:
  std::int64_t n_;
  double alpha_;
  double best_p_;
};

/// ln[C(n,s) θ^s (1-θ)^(n-s)]; -inf for outcomes impossible at θ ∈ {0, 1}.
double log_pmf(const BinomialOutcome& outcome, const BinomialModel& model);

/// ln P(X >= k) for X ~ Binomial(n, 0.5), summed from k = n inward.
/// Returns 0 for k <= 0 and -inf for k > n.
double log_upper_tail(std::int64_t n, std::int64_t k);

/// ln P(X <= k) for X ~ Binomial(n, 0.5), summed from k = 0 inward.
double log_lower_tail(std::int64_t n, std::int64_t k);

/// Natural log of the sign-test p-value (clamped to <= 0).
double log_p_value(const BinomialOutcome& outcome, TailConvention tail);

/// Sign-test p-value under θ = 0.5, in (0, 1].
double p_value(const BinomialOutcome& outcome, TailConvention tail);

struct Selection {
  std::int64_t s = 0;
  double p_achieved = 0.0;
};

/// The "barely significant" success count s in (n/2, n] for level alpha.
///
/// `p_achieved` is bit-identical to `p_value({n, s}, tail)`. Throws
/// InfeasibleSelection in either mode when even s = n has p > alpha, and
/// std::invalid_argument for n < 1 or alpha outside (0, 1).
Selection select_barely_significant(std::int64_t n, double alpha,
                                    SelectionMode mode = SelectionMode::NearestToAlpha,
                                    TailConvention tail = TailConvention::TwoSidedSymmetric);

}  // namespace threshold_lab
