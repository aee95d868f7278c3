#include "ewa/core.hpp"

#include <cmath>
#include <limits>

namespace ewa {

double empirical_loss(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "empirical_loss");
  return (a - b).squaredNorm() / static_cast<double>(a.cols());
}

double psnr(const Matrix& reference, const Matrix& test, double peak) {
  require_same_shape(reference, test, "psnr");
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
  const double mse = (reference - test).squaredNorm() / static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

AssumptionReport check_assumption_c(const std::vector<Matrix>& noise_draws,
                                    const std::vector<Matrix>& candidates,
                                    double b_xi, double l) {
  if (noise_draws.empty() || candidates.empty()) {
    throw std::invalid_argument("check_assumption_c: empty input");
  }
  const Index k = candidates.front().rows();
  const double sqrt_k = std::sqrt(static_cast<double>(k));

  AssumptionReport report;
  for (const Matrix& xi : noise_draws) {
    if (xi.rows() != k) throw std::invalid_argument("check_assumption_c: inconsistent K");
    for (Index i = 0; i < xi.cols(); ++i) {
      report.b_xi_observed = std::max(report.b_xi_observed, xi.col(i).norm() / sqrt_k);
    }
  }
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    require_same_shape(candidates[a], candidates.front(), "check_assumption_c");
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      for (Index i = 0; i < candidates[a].cols(); ++i) {
        const double d = (candidates[a].col(i) - candidates[b].col(i)).norm() / sqrt_k;
        report.l_observed = std::max(report.l_observed, d);
      }
    }
  }
  report.holds = report.b_xi_observed <= b_xi && report.l_observed <= l;
  return report;
}

}  // namespace ewa
