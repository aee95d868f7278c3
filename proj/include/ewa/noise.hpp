#pragma once

#include <memory>
#include <vector>

#include "ewa/matrix.hpp"
#include "ewa/rng.hpp"

namespace ewa {

enum class NoiseKind {
  Gaussian,                  // N(0, sigma^2) iid entries
  Uniform,                   // U[-b, b] iid entries
  Rademacher,                // +-a with equal probability, iid entries
  DiscreteBounded,           // finite symmetric support, iid entries
  SharedMagnitudeSymmetric,  // one magnitude vector shared by all columns, iid column signs
  Correlated,                // Sigma^{1/2} applied to a base draw
};

// Zero-mean noise distribution for the K x n noise matrix. Entry-level kinds
// draw iid entries; SharedMagnitudeSymmetric couples columns through a common
// magnitude vector while keeping the column-sign symmetry; Correlated mixes
// rows through the symmetric square root of a covariance matrix.
class NoiseModel {
 public:
  static NoiseModel gaussian(double sigma);
  static NoiseModel uniform(double half_width);
  static NoiseModel rademacher(double magnitude);
  // Support must be symmetric about zero with matching masses and the
  // probabilities must sum to one.
  static NoiseModel discrete_bounded(std::vector<double> support, std::vector<double> probs);
  // xi_i = eps_i * |z| where z is one base column draw shared by all columns
  // and eps_i are iid signs. Dependent across columns, sign-symmetric per column.
  static NoiseModel shared_magnitude_symmetric(NoiseModel base);
  static NoiseModel correlated(Matrix covariance, NoiseModel base);

  NoiseKind kind() const { return kind_; }
  double scale() const { return scale_; }  // sigma / b / a
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  const Matrix& covariance() const { return covariance_; }
  const NoiseModel& base() const { return *base_; }

  // Largest |value| an entry-level draw can take; throws for Gaussian.
  double entry_bound() const;
  // Scalar draw from the per-entry distribution (entry-level kinds only).
  double sample_scalar(Rng& rng) const;
  Matrix sample(Index k, Index n, Rng& rng) const;

 private:
  NoiseModel() = default;
  NoiseKind kind_ = NoiseKind::Gaussian;
  double scale_ = 1.0;
  std::vector<double> support_;
  std::vector<double> probs_;
  Matrix covariance_;
  Matrix sqrt_covariance_;
  std::shared_ptr<const NoiseModel> base_;
};

Matrix sample_noise(const NoiseModel& model, Index k, Index n, Rng& rng);

// Symmetric square root of a positive semidefinite matrix. Eigenvalues below
// -1e-12 * ||Sigma|| are rejected, small numerical negatives are clamped to 0.
Matrix psd_sqrt(const Matrix& sigma);

}  // namespace ewa
