#include "ewa/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ewa/stats.hpp"

namespace ewa {

EtaSpec::EtaSpec(double g) : gamma(g) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw std::invalid_argument("EtaSpec: gamma must be positive");
  }
  value_down = -1.0 - 1.0 / g;
  prob_down = g / (1.0 + 2.0 * g);
}

double sample_eta(const EtaSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return unif(rng) < spec.prob_down ? spec.value_down : 1.0;
}

namespace {

struct Fraction {
  __int128 num;
  __int128 den;
};

Fraction mul(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }

Fraction add(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }

}  // namespace

bool eta_mean_is_zero_rational(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) {
    throw std::invalid_argument("eta_mean_is_zero_rational: gamma must be positive");
  }
  // gamma = num/den, all arithmetic exact:
  //   P(up)   = 1 - gamma/(1+2gamma) = (den+num)/(den+2num)
  //   P(down) = gamma/(1+2gamma)     = num/(den+2num)
  //   v(down) = -1 - 1/gamma         = -(num+den)/num
  const Fraction p_up{den + num, den + 2 * num};
  const Fraction p_down{num, den + 2 * num};
  const Fraction v_up{1, 1};
  const Fraction v_down{-(num + den), num};
  const Fraction mean = add(mul(p_up, v_up), mul(p_down, v_down));
  return mean.num == 0;
}

SkorokhodReport skorokhod_check(const NoiseModel& dist, double gamma,
                                std::int64_t n_samples, Rng& rng) {
  switch (dist.kind()) {
    case NoiseKind::Gaussian:
    case NoiseKind::Uniform:
    case NoiseKind::Rademacher:
    case NoiseKind::DiscreteBounded:
      break;  // symmetric about 0 by construction
    default:
      throw std::invalid_argument("skorokhod_check: need a symmetric scalar distribution");
  }
  if (n_samples < 100) throw std::invalid_argument("skorokhod_check: too few samples");
  const EtaSpec spec(gamma);

  std::vector<double> mixed(static_cast<std::size_t>(n_samples));
  std::vector<double> reference(static_cast<std::size_t>(n_samples));
  std::vector<std::pair<double, double>> xz(static_cast<std::size_t>(n_samples));
  for (std::size_t i = 0; i < xz.size(); ++i) {
    const double xi = dist.sample_scalar(rng);
    const double zeta = xi * sample_eta(spec, rng);
    xz[i] = {xi, zeta};
    mixed[i] = xi + 2.0 * gamma * zeta;
    reference[i] = (1.0 + 2.0 * gamma) * dist.sample_scalar(rng);
  }

  // Atoms of a discrete xi reached along different arithmetic paths can
  // differ in the last double bits; comparing at float precision merges them
  // without affecting the continuous case.
  for (double& v : mixed) v = static_cast<float>(v);
  for (double& v : reference) v = static_cast<float>(v);

  SkorokhodReport report;
  report.cdf_distance = ks_distance_two_sample(mixed, reference);

  // sort by xi only: equal xi values keep their sampling order, so the
  // zeta values inside a bin stay exchangeable
  std::stable_sort(xz.begin(), xz.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const int n_bins = 20;
  report.bins.resize(n_bins);
  report.conditional_means_ok = true;
  for (int b = 0; b < n_bins; ++b) {
    const std::size_t lo = xz.size() * b / n_bins;
    const std::size_t hi = xz.size() * (b + 1) / n_bins;
    std::vector<double> zetas;
    zetas.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) zetas.push_back(xz[i].second);
    const MeanSe ms = mean_se(zetas);
    SkorokhodBin& bin = report.bins[b];
    bin.xi_low = xz[lo].first;
    bin.xi_high = xz[hi - 1].first;
    bin.zeta_mean = ms.mean;
    bin.zeta_se = ms.se;
    bin.count = static_cast<std::int64_t>(hi - lo);
    if (std::abs(ms.mean) > 4.0 * ms.se) report.conditional_means_ok = false;
  }
  return report;
}

}  // namespace ewa
