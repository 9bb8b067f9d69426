#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ousp {

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
double correlation(const std::vector<double>& a, const std::vector<double>& b);

double normal_cdf(double z);  // standard normal

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0, m = 0;  // m = 0 for one-sample
};

// asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}
double ks_tail(double lambda);

KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// critical statistic value at significance level for the two-sample test
double ks_two_sample_critical(double level, std::size_t n, std::size_t m);

}  // namespace ousp
