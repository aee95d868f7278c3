#pragma once

#include <cstdint>
#include <vector>

#include "ewa/noise.hpp"
#include "ewa/rng.hpp"

namespace ewa {

// Two-point multiplier law
//   eta = 1            with probability 1 - gamma/(1+2gamma)
//   eta = -1 - 1/gamma with probability gamma/(1+2gamma)
// With zeta = xi * eta for symmetric xi, xi + 2 gamma zeta is distributed as
// (1 + 2 gamma) xi and E[zeta | xi] = 0.
struct EtaSpec {
  double gamma;
  double value_down;  // -1 - 1/gamma
  double prob_down;   // gamma / (1 + 2 gamma)

  explicit EtaSpec(double gamma);
};

double sample_eta(const EtaSpec& spec, Rng& rng);

// Exact integer check that E[eta] = 0 for gamma = num/den.
bool eta_mean_is_zero_rational(std::int64_t num, std::int64_t den);

struct SkorokhodBin {
  double xi_low = 0.0;
  double xi_high = 0.0;
  double zeta_mean = 0.0;
  double zeta_se = 0.0;
  std::int64_t count = 0;
};

struct SkorokhodReport {
  double cdf_distance = 0.0;  // two-sample KS: xi + 2 gamma zeta  vs  (1+2gamma) xi'
  std::vector<SkorokhodBin> bins;
  bool conditional_means_ok = false;  // every bin |E[zeta|xi]| < 4 * bin SE
};

// Samples (xi, eta) with xi from a symmetric scalar distribution, sets
// zeta = xi * eta, and reports the distributional identity distance plus the
// binned conditional means of zeta given xi over 20 equal-mass bins.
SkorokhodReport skorokhod_check(const NoiseModel& dist, double gamma,
                                std::int64_t n_samples, Rng& rng);

}  // namespace ewa
