#pragma once

// Log-space special functions shared by the binomial and Beta-binomial code.

#include <cstdint>

namespace threshold_lab {

/// ln Γ(x) for x > 0. Stirling series after upward recurrence; relative
/// error below 1e-14 away from the roots at x = 1 and x = 2, which are exact.
double log_gamma(double x);

/// ln Γ(x + d) − ln Γ(x), x > 0 and x + d > 0. When d is a small integer the
/// ratio is formed as a product of logs so the large log-gamma terms never
/// cancel; otherwise falls back to the difference of log_gamma values.
double log_gamma_ratio(double x, double d);

/// ln B(a, b).
double log_beta(double a, double b);

/// ln C(n, k) for 0 <= k <= n. Symmetric in k <-> n-k bit for bit.
double log_choose(std::int64_t n, std::int64_t k);

/// ln(e^a + e^b) without overflow; -inf is the additive identity.
double log_add_exp(double a, double b);

}  // namespace threshold_lab
