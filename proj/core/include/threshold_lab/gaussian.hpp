#pragma once

namespace threshold_lab {

/// Standard normal density.
double normal_pdf(double z);

/// Φ(z) via the complementary error function; ±inf map to 0 and 1.
double normal_cdf(double z);

/// Φ⁻¹(q) for q in (0, 1). Acklam's rational approximation followed by one
/// Newton step against normal_cdf. The upper half is evaluated as the
/// reflection of the lower half. Throws std::invalid_argument outside (0, 1).
double normal_quantile(double q);

}  // namespace threshold_lab
