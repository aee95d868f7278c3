#pragma once

#include <vector>

#include "ewa/matrix.hpp"

namespace ewa {

// In-sample prediction error: (1/n) * ||a - b||_F^2.
double empirical_loss(const Matrix& a, const Matrix& b);

// 10 * log10(peak^2 / MSE) in dB; +infinity when the inputs are identical.
double psnr(const Matrix& reference, const Matrix& test, double peak = 255.0);

struct AssumptionReport {
  double b_xi_observed = 0.0;  // max_i ||xi_i||_2 / sqrt(K) over all draws
  double l_observed = 0.0;     // max pairwise column distance / sqrt(K)
  bool holds = false;          // both observed constants within (b_xi, l)
};

// Observed boundedness constants of a noise sample set and a candidate set,
// with the 1/sqrt(K) normalization that makes them dimension-free.
AssumptionReport check_assumption_c(const std::vector<Matrix>& noise_draws,
                                    const std::vector<Matrix>& candidates,
                                    double b_xi, double l);

}  // namespace ewa
