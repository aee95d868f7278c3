#include "ewa/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ewa {

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integrates f over [a, b] splitting at the supplied kink locations.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints, double tol) {
  std::vector<double> cuts{a, b};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate(f, cuts[i], cuts[i + 1], tol);
  }
  return total;
}

double gaussian_pdf(double x, double sigma) {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("linspace: need at least 2 points");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return g;
}

SteinProfile stein_profile(const NoiseModel& dist, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("stein_profile: empty grid");
  SteinProfile p;
  p.grid = grid;
  p.m_values.resize(grid.size());
  p.g_values.resize(grid.size());

  switch (dist.kind()) {
    case NoiseKind::Gaussian: {
      const double s = dist.scale();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        p.m_values[i] = s * s * gaussian_pdf(grid[i], s);
        p.g_values[i] = s * s;  // m / pdf is constant
      }
      break;
    }
    case NoiseKind::Uniform: {
      const double b = dist.scale();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        if (std::abs(x) > b) {
          p.m_values[i] = 0.0;
          p.g_values[i] = 0.0;
        } else {
          p.m_values[i] = (b * b - x * x) / (4.0 * b);
          p.g_values[i] = (b * b - x * x) / 2.0;
        }
      }
      break;
    }
    case NoiseKind::Rademacher:
    case NoiseKind::DiscreteBounded:
      // m dx is absolutely continuous with respect to Lebesgue measure and
      // therefore never with respect to a counting measure.
      throw std::invalid_argument(
          "stein_profile: discrete noise admits no bounded Radon-Nikodym profile");
    default:
      throw std::invalid_argument("stein_profile: unsupported noise kind");
  }
  p.g_max = *std::max_element(p.g_values.begin(), p.g_values.end());
  return p;
}

SteinProfile stein_profile(const BoundedDensity& density, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("stein_profile: empty grid");
  if (!(density.support > 0.0)) throw std::invalid_argument("stein_profile: bad support");
  const double b = density.support;
  auto integrand = [&](double y) { return y * density.pdf(y); };

  SteinProfile p;
  p.grid = grid;
  p.m_values.resize(grid.size());
  p.g_values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    // Zero mean makes -E[xi 1(xi <= x)] = E[xi 1(xi > x)].
    const double m = x >= b ? 0.0 : integrate_piecewise(integrand, std::max(x, -b), b,
                                                        density.breakpoints, 1e-10);
    const double pdf = density.pdf(x);
    p.m_values[i] = m;
    p.g_values[i] = pdf > 0.0 ? m / pdf : 0.0;
  }
  p.g_max = *std::max_element(p.g_values.begin(), p.g_values.end());
  return p;
}

double stein_constant(const NoiseModel& dist) {
  switch (dist.kind()) {
    case NoiseKind::Gaussian:
      return dist.scale() * dist.scale();
    case NoiseKind::Uniform:
      return dist.scale() * dist.scale() / 2.0;
    default:
      throw std::invalid_argument("stein_constant: no analytic constant for this kind");
  }
}

double convolved_stein_constant(double b_xi) {
  if (!(b_xi > 0.0)) throw std::invalid_argument("convolved_stein_constant: b_xi must be positive");
  return 2.0 * b_xi * b_xi;
}

BoundedDensity uniform_convolution_density(const NoiseModel& base, double half_width) {
  if (!(half_width > 0.0)) {
    throw std::invalid_argument("uniform_convolution_density: half width must be positive");
  }
  const double w = half_width;
  BoundedDensity d;
  switch (base.kind()) {
    case NoiseKind::Rademacher:
    case NoiseKind::DiscreteBounded: {
      std::vector<double> atoms;
      std::vector<double> masses;
      if (base.kind() == NoiseKind::Rademacher) {
        atoms = {-base.scale(), base.scale()};
        masses = {0.5, 0.5};
      } else {
        atoms = base.support();
        masses = base.probs();
      }
      d.support = base.entry_bound() + w;
      d.pdf = [atoms, masses, w](double x) {
        double mass = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          if (std::abs(atoms[i] - x) <= w) mass += masses[i];
        }
        return mass / (2.0 * w);
      };
      for (double a : atoms) {
        d.breakpoints.push_back(a - w);
        d.breakpoints.push_back(a + w);
      }
      break;
    }
    case NoiseKind::Uniform: {
      const double b = base.scale();
      d.support = b + w;
      d.pdf = [b, w](double x) {
        const double lo = std::max(x - w, -b);
        const double hi = std::min(x + w, b);
        return hi > lo ? (hi - lo) / (2.0 * b * 2.0 * w) : 0.0;
      };
      d.breakpoints = {-b - w, -std::abs(b - w), std::abs(b - w), b + w};
      break;
    }
    default:
      throw std::invalid_argument("uniform_convolution_density: base must be bounded");
  }
  return d;
}

}  // namespace ewa
