#pragma once

#include <vector>

#include "ewa/matrix.hpp"

namespace ewa {

// Finite-support prior: candidate matrices with positive masses summing to 1.
struct DiscreteDictionary {
  std::vector<Matrix> candidates;
  std::vector<double> weights;

  static DiscreteDictionary uniform(std::vector<Matrix> candidates);
  static DiscreteDictionary weighted(std::vector<Matrix> candidates,
                                     std::vector<double> weights);
  void validate() const;
};

// Gibbs weights w_j proportional to prior_j * exp(-losses_j / (2 tau)),
// computed with max-subtraction.
std::vector<double> gibbs_weights(const std::vector<double>& losses,
                                  const std::vector<double>& prior_mass, double tau);

// Exact posterior mean over the finite support: sum_j w_j F_j.
Matrix discrete_ewa(const DiscreteDictionary& dict, const Matrix& y, double tau);

struct OracleRhs {
  double gibbs;       // exact infimum over all measures on the support
  double point_mass;  // min_j { l_n(F_j, F*) + 2 tau log(1 / prior_j) }
};

// inf_p { sum_j p_j l_n(F_j, F*) + 2 tau KL(p || prior) } in closed form:
//   -2 tau log sum_j prior_j exp(-l_n(F_j, F*) / (2 tau)).
OracleRhs oracle_rhs_discrete(const DiscreteDictionary& dict, const Matrix& f_star,
                              double tau);

}  // namespace ewa
