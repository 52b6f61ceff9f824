#include "threshold_lab/log_space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace threshold_lab {

namespace {

constexpr double kStirlingThreshold = 15.0;

// Stirling series for ln Γ(x), x >= kStirlingThreshold. The first omitted
// term is below 1e-21 at the threshold.
double stirling_log_gamma(double x) {
  // Bernoulli-number coefficients B_2k / (2k (2k-1)).
  constexpr double c1 = 1.0 / 12.0;
  constexpr double c2 = -1.0 / 360.0;
  constexpr double c3 = 1.0 / 1260.0;
  constexpr double c4 = -1.0 / 1680.0;
  constexpr double c5 = 1.0 / 1188.0;
  constexpr double c6 = -691.0 / 360360.0;
  constexpr double c7 = 1.0 / 156.0;
  constexpr double c8 = -3617.0 / 122400.0;

  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (c1 + inv2 * (c2 + inv2 * (c3 + inv2 * (c4 + inv2 * (c5 + inv2 * (c6 + inv2 * (c7 + inv2 * c8)))))));
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

// (k-1)! for k = 1..23; every entry is exactly representable.
constexpr std::array<double, 23> kFactorials = [] {
  std::array<double, 23> table{};
  double f = 1.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = f;
    f *= static_cast<double>(i + 1);
  }
  return table;
}();

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x <= static_cast<double>(kFactorials.size()) && x == std::nearbyint(x)) {
    return std::log(kFactorials[static_cast<std::size_t>(x) - 1]);
  }
  if (x >= kStirlingThreshold) return stirling_log_gamma(x);

  // Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1)); the product stays well inside
  // double range for x < 15.
  double shifted = x;
  double product = 1.0;
  while (shifted < kStirlingThreshold) {
    product *= shifted;
    shifted += 1.0;
  }
  return stirling_log_gamma(shifted) - std::log(product);
}

double log_gamma_ratio(double x, double d) {
  if (!(x > 0.0) || !(x + d > 0.0)) {
    throw std::invalid_argument("log_gamma_ratio: arguments must keep x and x + d positive");
  }
  if (d == 0.0) return 0.0;

  constexpr double kMaxExactSteps = 64.0;
  if (d == std::nearbyint(d) && std::abs(d) <= kMaxExactSteps) {
    // Integer shift: ln Γ(x+d)/Γ(x) = Σ ln(x + i) over the shifted range.
    const bool up = d > 0.0;
    const double lo = up ? x : x + d;
    const auto steps = static_cast<int>(std::abs(d));
    double sum = 0.0;
    for (int i = 0; i < steps; ++i) sum += std::log(lo + i);
    return up ? sum : -sum;
  }
  return log_gamma(x + d) - log_gamma(x);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("log_beta: shapes must be positive");
  }
  // ln B(a,b) = ln Γ(a) − ln Γ(a+b) + ln Γ(b); the ratio form keeps
  // integer shapes exact.
  return -log_gamma_ratio(a, b) + log_gamma(b);
}

double log_choose(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("log_choose: need 0 <= k <= n, got n=" + std::to_string(n) +
                                " k=" + std::to_string(k));
  }
  const std::int64_t m = std::min(k, n - k);
  if (m == 0) return 0.0;
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return log_gamma(nd + 1.0) - log_gamma(md + 1.0) - log_gamma(nd - md + 1.0);
}

double log_add_exp(double a, double b) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace threshold_lab
