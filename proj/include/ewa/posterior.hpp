#pragma once

#include "ewa/matrix.hpp"
#include "ewa/prior.hpp"

namespace ewa {

// Tempered posterior pi_n(F) proportional to
//   exp{ -(1/2 tau) l_n(F, Y) } * pi0(F).
struct PosteriorConfig {
  double tau = 1.0;
  PriorConfig prior;

  void validate() const;
};

// -(1/(2 tau)) l_n(F, Y) + log pi0(F), both pieces unnormalized.
double log_posterior_unnormalized(const Matrix& f, const Matrix& y,
                                  const PosteriorConfig& cfg);

// M = (lambda^2 I + F F^T)^{-1} F. gd_steps = 0 gives the exact solve;
// otherwise gd_steps iterations of gradient descent on
//   phi(M) = ||I_n - F^T M||_F^2 + lambda^2 ||M||_F^2
// from M0 = 0 with step 1/(||F||^2 + lambda^2), whose unique minimizer is the
// exact M. The step uses a power-iteration estimate of the spectral norm.
Matrix solve_ridge_m(const Matrix& f, double lambda, int gd_steps);

// -(1/(n tau)) (F - Y) - (n+K+2) * solve_ridge_m(F, lambda, gd_steps).
Matrix grad_log_posterior(const Matrix& f, const Matrix& y,
                          const PosteriorConfig& cfg, int gd_steps = 0);

}  // namespace ewa
