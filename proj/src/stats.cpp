#include "ousp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ousp {

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / (double)v.size();
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need at least two points");
  double m = mean(v), acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / (double)(v.size() - 1);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("correlation: bad sample sizes");
  double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ks_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double acc = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    acc += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * acc));
}

KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf) {
  if (data.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(data.begin(), data.end());
  std::size_t n = data.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double F = cdf(data[i]);
    d = std::max(d, std::fabs(F - (double)i / n));
    d = std::max(d, std::fabs((double)(i + 1) / n - F));
  }
  double rn = std::sqrt((double)n);
  double lambda = (rn + 0.12 + 0.11 / rn) * d;
  return {d, ks_tail(lambda), n, 0};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs((double)i / a.size() - (double)j / b.size()));
  }
  double ne = (double)a.size() * b.size() / (double)(a.size() + b.size());
  double rn = std::sqrt(ne);
  double lambda = (rn + 0.12 + 0.11 / rn) * d;
  return {d, ks_tail(lambda), a.size(), b.size()};
}

double ks_two_sample_critical(double level, std::size_t n, std::size_t m) {
  // invert the asymptotic tail: Q(c) = level
  double lo = 0.2, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (ks_tail(mid) > level ? lo : hi) = mid;
  }
  double c = 0.5 * (lo + hi);
  return c * std::sqrt((double)(n + m) / ((double)n * m));
}

}  // namespace ousp
