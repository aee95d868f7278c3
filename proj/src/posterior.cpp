#include "ewa/posterior.hpp"

#include <cmath>

#include "ewa/core.hpp"

namespace ewa {

void PosteriorConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("PosteriorConfig: tau must be positive");
  }
  prior.validate();
}

double log_posterior_unnormalized(const Matrix& f, const Matrix& y,
                                  const PosteriorConfig& cfg) {
  cfg.validate();
  require_same_shape(f, y, "log_posterior_unnormalized");
  return -empirical_loss(f, y) / (2.0 * cfg.tau) + log_prior_unnormalized(f, cfg.prior);
}

namespace {

// Largest eigenvalue of the SPD matrix a by power iteration; deterministic
// start vector, converges from below.
double top_eigenvalue(const Matrix& a) {
  Vector v = Vector::Ones(a.rows());
  v.normalize();
  double value = 0.0;
  for (int it = 0; it < 50; ++it) {
    Vector w = a.selfadjointView<Eigen::Lower>() * v;
    value = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
  }
  return value;
}

}  // namespace

Matrix solve_ridge_m(const Matrix& f, double lambda, int gd_steps) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_ridge_m: lambda must be positive");
  if (gd_steps < 0) throw std::invalid_argument("solve_ridge_m: gd_steps must be >= 0");
  require_finite(f, "solve_ridge_m");

  Matrix a = Matrix::Identity(f.rows(), f.rows()) * (lambda * lambda);
  a.selfadjointView<Eigen::Lower>().rankUpdate(f);

  if (gd_steps == 0) {
    Eigen::LLT<Matrix> llt(Matrix(a.selfadjointView<Eigen::Lower>()));
    return llt.solve(f);
  }

  const double step = 1.0 / std::max(top_eigenvalue(a), lambda * lambda);
  Matrix m = Matrix::Zero(f.rows(), f.cols());
  for (int t = 0; t < gd_steps; ++t) {
    m.noalias() -= step * (a.selfadjointView<Eigen::Lower>() * m - f);
  }
  return m;
}

Matrix grad_log_posterior(const Matrix& f, const Matrix& y,
                          const PosteriorConfig& cfg, int gd_steps) {
  cfg.validate();
  require_same_shape(f, y, "grad_log_posterior");
  const double n = static_cast<double>(f.cols());
  const double shape = static_cast<double>(cfg.prior.n + cfg.prior.k + 2);
  return -(f - y) / (n * cfg.tau) - shape * solve_ridge_m(f, cfg.prior.lambda, gd_steps);
}

}  // namespace ewa
