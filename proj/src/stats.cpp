#include "ewa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ewa {

MeanSe mean_se(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_se: empty input");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(static_cast<double>(i) / n - f));
  }
  return d;
}

double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double median_of_means(const std::vector<double>& values, int blocks) {
  if (values.empty()) throw std::invalid_argument("median_of_means: empty input");
  if (blocks < 1) throw std::invalid_argument("median_of_means: blocks must be >= 1");
  blocks = std::min<int>(blocks, static_cast<int>(values.size()));
  std::vector<double> means(blocks, 0.0);
  std::vector<std::size_t> counts(blocks, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t b = i % static_cast<std::size_t>(blocks);
    means[b] += values[i];
    ++counts[b];
  }
  for (int b = 0; b < blocks; ++b) means[b] /= static_cast<double>(counts[b]);
  std::nth_element(means.begin(), means.begin() + blocks / 2, means.end());
  double hi = means[blocks / 2];
  if (blocks % 2 == 1) return hi;
  std::nth_element(means.begin(), means.begin() + blocks / 2 - 1, means.end());
  return 0.5 * (means[blocks / 2 - 1] + hi);
}

}  // namespace ewa
