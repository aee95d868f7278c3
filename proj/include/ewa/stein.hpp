#pragma once

#include <functional>
#include <vector>

#include "ewa/noise.hpp"

namespace ewa {

// Profile of m(x) = -E[xi 1(xi <= x)] and g = m / density on a grid, with
// G = sup g. m is nonnegative for zero-mean distributions; a finite G is what
// the Stein-type risk identity needs.
struct SteinProfile {
  std::vector<double> grid;
  std::vector<double> m_values;
  std::vector<double> g_values;
  double g_max = 0.0;
};

// Density with support [-b, b]. Optional breakpoints mark kinks so the
// integrator can split there.
struct BoundedDensity {
  std::function<double(double)> pdf;
  double support = 1.0;
  std::vector<double> breakpoints;
};

// Analytic profiles: Gaussian m(x) = sigma^2 phi_sigma(x) (g constant at
// sigma^2), Uniform[-b,b] m(x) = (b^2 - x^2)/(4b) (G = b^2/2). Discrete
// distributions are rejected: m dx is absolutely continuous with respect to
// Lebesgue measure, never with respect to a counting measure.
SteinProfile stein_profile(const NoiseModel& dist, const std::vector<double>& grid);

// Numeric profile for a supplied compact-support density; m by adaptive
// quadrature to absolute tolerance 1e-10.
SteinProfile stein_profile(const BoundedDensity& density, const std::vector<double>& grid);

// Constant scale factor G for the analytic families; used by the risk bound
// thresholds. Throws for kinds without a finite constant.
double stein_constant(const NoiseModel& dist);

// G of bounded noise convolved with Uniform[-b_xi, b_xi]: 2 b_xi^2.
double convolved_stein_constant(double b_xi);

// Density of base + Uniform[-half_width, half_width] for a bounded base:
//   p(x) = P(base in [x - w, x + w]) / (2w).
// Supported bases: Rademacher, DiscreteBounded, Uniform.
BoundedDensity uniform_convolution_density(const NoiseModel& base, double half_width);

std::vector<double> linspace(double lo, double hi, int count);

}  // namespace ewa
