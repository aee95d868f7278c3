#pragma once

#include "ewa/matrix.hpp"
#include "ewa/rng.hpp"

namespace ewa {

// Spectral scaled Student prior on K x n matrices:
//   pi0(F) proportional to det(lambda^2 I_K + F F^T)^{-(n+K+2)/2}
// Heavy tailed in the singular values of F, favors low rank.
struct PriorConfig {
  double lambda = 1.0;
  Index k = 1;
  Index n = 1;

  double exponent() const { return 0.5 * static_cast<double>(n + k + 2); }
  void validate() const;
};

// -((n+K+2)/2) * log det(lambda^2 I + F F^T), via Cholesky of the SPD matrix.
double log_prior_unnormalized(const Matrix& f, const PriorConfig& cfg);

// -(n+K+2) * (lambda^2 I + F F^T)^{-1} F  (exact linear solve).
Matrix grad_log_prior(const Matrix& f, const PriorConfig& cfg);

// Exact draw: F = lambda * W^{-1/2} Z with Z iid standard normal K x n and
// W ~ Wishart(I_K, 3+K-1) independent of Z, realized through the Bartlett
// factorization. The (n+K+2)/2 exponent corresponds to 3 degrees of freedom,
// so column marginals are K-variate Student t_3 scaled by lambda/sqrt(3).
Matrix sample_prior(const PriorConfig& cfg, Rng& rng);

enum class KlNorm { Frobenius, Spectral };

// Upper bound on D_KL(shifted prior || prior) for a shift by f_bar:
//   2 r (n+K+2) log(1 + ||f_bar||_F / (sqrt(2r) lambda))
// where r is the numerical rank of f_bar (singular values above 1e-10 of the
// largest). KlNorm::Spectral replaces the argument by ||f_bar|| / lambda.
double kl_shift_bound(const Matrix& f_bar, const PriorConfig& cfg,
                      KlNorm norm = KlNorm::Frobenius);

// Numerical rank at relative threshold 1e-10.
int numerical_rank(const Matrix& m);

// CDF of the standard Student t distribution with 3 degrees of freedom.
double student_t3_cdf(double x);

}  // namespace ewa
