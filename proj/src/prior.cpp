#include "ewa/prior.hpp"

#include <cmath>
#include <numbers>

namespace ewa {

void PriorConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("PriorConfig: lambda must be positive");
  }
  if (k < 1 || n < 1) throw std::invalid_argument("PriorConfig: K, n must be >= 1");
}

namespace {

void check_input(const Matrix& f, const PriorConfig& cfg, const char* where) {
  cfg.validate();
  if (f.rows() != cfg.k || f.cols() != cfg.n) {
    throw std::invalid_argument(std::string(where) + ": matrix does not match config shape");
  }
  require_finite(f, where);
}

// lambda^2 I_K + F F^T, always SPD for lambda > 0.
Matrix shifted_gram(const Matrix& f, double lambda) {
  Matrix a = Matrix::Identity(f.rows(), f.rows()) * (lambda * lambda);
  a.selfadjointView<Eigen::Lower>().rankUpdate(f);
  return a.selfadjointView<Eigen::Lower>();
}

}  // namespace

double log_prior_unnormalized(const Matrix& f, const PriorConfig& cfg) {
  check_input(f, cfg, "log_prior_unnormalized");
  Eigen::LLT<Matrix> llt(shifted_gram(f, cfg.lambda));
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("log_prior_unnormalized: Cholesky failed");
  }
  double log_det = 0.0;
  const auto& l = llt.matrixLLT();
  for (Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(l(i, i));
  return -cfg.exponent() * log_det;
}

Matrix grad_log_prior(const Matrix& f, const PriorConfig& cfg) {
  check_input(f, cfg, "grad_log_prior");
  Eigen::LLT<Matrix> llt(shifted_gram(f, cfg.lambda));
  return -static_cast<double>(cfg.n + cfg.k + 2) * llt.solve(f);
}

Matrix sample_prior(const PriorConfig& cfg, Rng& rng) {
  cfg.validate();
  const Index k = cfg.k;
  // Bartlett factor of W ~ Wishart(I_K, K+2): lower triangular, chi on the
  // diagonal, standard normals below.
  Matrix a = Matrix::Zero(k, k);
  std::normal_distribution<double> normal;
  for (Index i = 0; i < k; ++i) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(k + 2 - i));
    a(i, i) = std::sqrt(chi2(rng));
    for (Index j = 0; j < i; ++j) a(i, j) = normal(rng);
  }
  Matrix z = gaussian_matrix(k, cfg.n, rng);
  // A^{-T} A^{-1} = W^{-1}, so A^{-T} Z has the W^{-1/2} law needed here.
  return cfg.lambda * a.transpose().triangularView<Eigen::Upper>().solve(z);
}

int numerical_rank(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = 1e-10 * s(0);
  int r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++r;
  }
  return r;
}

double kl_shift_bound(const Matrix& f_bar, const PriorConfig& cfg, KlNorm norm) {
  cfg.validate();
  if (f_bar.rows() != cfg.k || f_bar.cols() != cfg.n) {
    throw std::invalid_argument("kl_shift_bound: shape mismatch");
  }
  const int r = numerical_rank(f_bar);
  if (r == 0) return 0.0;
  const double size = norm == KlNorm::Frobenius
                          ? f_bar.norm()
                          : Eigen::JacobiSVD<Matrix>(f_bar).singularValues()(0);
  const double arg = norm == KlNorm::Frobenius
                         ? size / (std::sqrt(2.0 * r) * cfg.lambda)
                         : size / cfg.lambda;
  return 2.0 * r * static_cast<double>(cfg.n + cfg.k + 2) * std::log1p(arg);
}

double student_t3_cdf(double x) {
  const double u = x / std::numbers::sqrt3;
  return 0.5 + (std::atan(u) + u / (1.0 + u * u)) / std::numbers::pi;
}

}  // namespace ewa
