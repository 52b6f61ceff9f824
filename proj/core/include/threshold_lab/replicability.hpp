#pragma once

namespace threshold_lab {

/// Probability that a replication reproduces the sign of an effect observed
/// with one-tailed p-value `p_in`.
struct PrepReport {
  double p_in = 0.5;
  double p_rep = 0.5;
  double failure_prob = 0.5;  // 1 - p_rep
};

/// p_rep = Φ(Φ⁻¹(1 - p) / √2). Throws std::invalid_argument unless 0 < p < 1.
PrepReport p_rep(double p);

}  // namespace threshold_lab
