#include "ewa/discrete.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "ewa/core.hpp"

namespace ewa {

DiscreteDictionary DiscreteDictionary::uniform(std::vector<Matrix> candidates) {
  DiscreteDictionary d;
  d.weights.assign(candidates.size(), 1.0 / static_cast<double>(candidates.size()));
  d.candidates = std::move(candidates);
  d.validate();
  return d;
}

DiscreteDictionary DiscreteDictionary::weighted(std::vector<Matrix> candidates,
                                                std::vector<double> weights) {
  DiscreteDictionary d;
  d.candidates = std::move(candidates);
  d.weights = std::move(weights);
  d.validate();
  return d;
}

void DiscreteDictionary::validate() const {
  if (candidates.empty() || candidates.size() != weights.size()) {
    throw std::invalid_argument("DiscreteDictionary: candidate/weight size mismatch");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("DiscreteDictionary: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("DiscreteDictionary: weights must sum to 1");
  }
  for (const Matrix& c : candidates) {
    require_same_shape(c, candidates.front(), "DiscreteDictionary");
  }
}

std::vector<double> gibbs_weights(const std::vector<double>& losses,
                                  const std::vector<double>& prior_mass, double tau) {
  if (losses.empty() || losses.size() != prior_mass.size()) {
    throw std::invalid_argument("gibbs_weights: size mismatch");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("gibbs_weights: tau must be positive");
  const double loss_min = *std::min_element(losses.begin(), losses.end());
  std::vector<double> w(losses.size());
  double total = 0.0;
  for (std::size_t j = 0; j < losses.size(); ++j) {
    w[j] = prior_mass[j] * std::exp(-(losses[j] - loss_min) / (2.0 * tau));
    total += w[j];
  }
  // The max-subtracted exponent is 0 for at least one candidate, so the sum
  // cannot underflow to zero.
  assert(total > 0.0);
  for (double& v : w) v /= total;
  return w;
}

Matrix discrete_ewa(const DiscreteDictionary& dict, const Matrix& y, double tau) {
  dict.validate();
  std::vector<double> losses(dict.candidates.size());
  for (std::size_t j = 0; j < dict.candidates.size(); ++j) {
    losses[j] = empirical_loss(dict.candidates[j], y);
  }
  const std::vector<double> w = gibbs_weights(losses, dict.weights, tau);
  Matrix out = Matrix::Zero(y.rows(), y.cols());
  for (std::size_t j = 0; j < dict.candidates.size(); ++j) {
    out += w[j] * dict.candidates[j];
  }
  return out;
}

OracleRhs oracle_rhs_discrete(const DiscreteDictionary& dict, const Matrix& f_star,
                              double tau) {
  dict.validate();
  if (!(tau > 0.0)) throw std::invalid_argument("oracle_rhs_discrete: tau must be positive");
  std::vector<double> losses(dict.candidates.size());
  for (std::size_t j = 0; j < dict.candidates.size(); ++j) {
    losses[j] = empirical_loss(dict.candidates[j], f_star);
  }
  const double loss_min = *std::min_element(losses.begin(), losses.end());
  double z = 0.0;
  OracleRhs rhs{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < losses.size(); ++j) {
    z += dict.weights[j] * std::exp(-(losses[j] - loss_min) / (2.0 * tau));
    rhs.point_mass = std::min(rhs.point_mass, losses[j] + 2.0 * tau * std::log(1.0 / dict.weights[j]));
  }
  rhs.gibbs = loss_min - 2.0 * tau * std::log(z);
  return rhs;
}

}  // namespace ewa
