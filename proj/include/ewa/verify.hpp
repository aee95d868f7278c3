#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ewa/discrete.hpp"
#include "ewa/lmc.hpp"
#include "ewa/noise.hpp"

namespace ewa {

// Risk bounds certified by the harness:
//   T1 - sign-symmetric (possibly dependent) bounded noise, bounded dictionary
//   T2 - row-correlated noise Sigma^{1/2} xi_bar, bounded dictionary
//   T3 - iid noise with finite Stein constant, no dictionary bound needed
//   T4 - bounded iid noise + uniform label perturbation (noisy EWA)
enum class Theorem { T1, T2, T3, T4 };

Theorem theorem_from_string(const std::string& name);
std::string to_string(Theorem t);

struct TheoremScenario {
  std::string id;
  Theorem which = Theorem::T1;
  DiscreteDictionary dict;
  Matrix f_star;
  NoiseModel noise = NoiseModel::gaussian(1.0);
  double tau = 0.0;     // 0 selects the smallest admissible temperature
  double b_xi = 0.0;    // T1: column bound; T2: entry bound of the base; T4: entry bound
  double perturb = 0.0; // T4 perturbation half-width; defaults to b_xi
  int trials = 2000;
  std::uint64_t seed = 1;
};

struct RiskReport {
  std::string scenario_id;
  int trials = 0;
  double empirical_risk = 0.0;
  double std_error = 0.0;
  double bound_rhs = 0.0;
  double slack = 0.0;  // bound_rhs - empirical_risk
  bool passed = false; // empirical_risk <= bound_rhs + 3 * std_error
};

// Smallest temperature admitted by the scenario's theorem. Also validates
// that the noise model fits the theorem's assumptions.
double theorem_tau_threshold(const TheoremScenario& s);

// Monte Carlo certification: per trial draws noise, forms Y = F* + xi
// (perturbed once more for T4), computes the exact discrete EWA and
// accumulates l_n against F*. The bound side is the closed-form infimum.
RiskReport verify_theorem(const TheoremScenario& s);

// Bracketed bound of the low-rank oracle inequality evaluated at f_bar:
//   l_n(f_bar, f_star) + 4 r (n+K+2) tau log(1 + ||f_bar||_F/(sqrt(2r) lambda)) + K lambda^2
double theorem5_rhs(const Matrix& f_bar, const Matrix& f_star, double lambda, double tau);

struct LowRankScenario {
  std::string id = "t5_lowrank";
  Index k = 8;
  Index n = 40;
  int rank = 1;
  double b_xi = 1.0;
  double f_star_scale = 2.0;  // sqrt of l_n(0, F*)
  double tau = 0.0;           // 0 -> 2 b_xi^2 / n
  double lambda = 0.0;        // 0 -> sqrt(b_xi^2 (n+K)/K)
  double h = 0.02;
  int k_max = 2000;
  int chains = 64;
  int trials = 50;
  int threads = 0;
  std::uint64_t seed = 5;
};

// End-to-end check of the low-rank bound: noisy EWA through Langevin chains
// on Rademacher noise, bound minimized over {0, F*}.
RiskReport verify_theorem5_lmc(const LowRankScenario& s);

struct McEwaIdentityReport {
  double lhs = 0.0;          // E l_n(MC-EWA, F*) from actual draws
  double rhs = 0.0;          // E l_n(EWA, F*) + (1/N) E int l_n(F, EWA) dpi_n
  double gap = 0.0;          // mean per-trial difference
  double gap_se = 0.0;
  double mc_excess = 0.0;    // mean l_n(MC-EWA, EWA); estimates the (1/N) term
  double mc_excess_se = 0.0;
  int n_samples = 0;
  int trials = 0;
};

// Risk identity of the Monte Carlo EWA on a finite dictionary, where both
// sides are computable: the posterior is categorical, MC-EWA averages
// n_samples exact categorical draws.
McEwaIdentityReport mcewa_identity_check(const DiscreteDictionary& dict,
                                         const Matrix& f_star, const NoiseModel& noise,
                                         double tau, int n_samples, int trials, Rng& rng);

// Built-in scenarios, at least two per theorem.
std::vector<TheoremScenario> scenario_library();

std::string risk_report_csv_header();
std::string to_csv_row(const RiskReport& r);
void print_report(std::ostream& os, const RiskReport& r);

}  // namespace ewa
