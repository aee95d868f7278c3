#pragma once

#include <functional>
#include <vector>

namespace ewa {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& values);

// One-sample Kolmogorov-Smirnov distance against a reference CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance_two_sample(std::vector<double> a, std::vector<double> b);

// Median of block means; robust for heavy-tailed values with finite mean.
double median_of_means(const std::vector<double>& values, int blocks);

}  // namespace ewa
