#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ousp/rng.hpp"
#include "ousp/stats.hpp"

using namespace ousp;

TEST_CASE("streams are deterministic and decorrelated") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 1000; ++i) CHECK(a.uniform() == b.uniform());
  // different stream gives a different sequence
  RngStream a2(42, 7);
  bool differs = false;
  for (int i = 0; i < 16 && !differs; ++i) differs = a2.uniform() != c.uniform();
  CHECK(differs);
}

TEST_CASE("generator moments") {
  RngStream rng(123, 0);
  const int N = 200000;
  double su = 0, sn = 0, sn2 = 0, se = 0, sp = 0, sg = 0, sb = 0;
  for (int i = 0; i < N; ++i) {
    su += rng.uniform();
    double z = rng.normal();
    sn += z;
    sn2 += z * z;
    se += rng.exponential();
    sp += (double)rng.poisson(3.7);
    sg += (double)rng.geometric_count(0.6);
    sb += (double)rng.binomial(10, 0.3);
  }
  CHECK(su / N == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sn / N == doctest::Approx(0.0).epsilon(1.0).scale(0.01));
  CHECK(sn2 / N == doctest::Approx(1.0).epsilon(0.02));
  CHECK(se / N == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sp / N == doctest::Approx(3.7).epsilon(0.02));
  CHECK(sg / N == doctest::Approx(1.0 / 0.4).epsilon(0.02));  // support >= 1, mean 1/(1-b)
  CHECK(sb / N == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("large-mean poisson uses the halving path consistently") {
  RngStream rng(9, 1);
  const int N = 50000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    double v = (double)rng.poisson(250.0);
    s += v;
    s2 += v * v;
  }
  double m = s / N, var = s2 / N - m * m;
  CHECK(m == doctest::Approx(250.0).epsilon(0.01));
  CHECK(var == doctest::Approx(250.0).epsilon(0.1));
}

TEST_CASE("basic statistics") {
  std::vector<double> v = {1, 2, 3, 4, 5};
  CHECK(mean(v) == doctest::Approx(3.0));
  CHECK(variance(v) == doctest::Approx(2.5));
  std::vector<double> w = {2, 4, 6, 8, 10};
  CHECK(correlation(v, w) == doctest::Approx(1.0));
  std::vector<double> u = {5, 4, 3, 2, 1};
  CHECK(correlation(v, u) == doctest::Approx(-1.0));
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_cdf(-8.0) == doctest::Approx(6.22e-16).epsilon(0.01));
}

TEST_CASE("kolmogorov tail and critical values") {
  // classical table: Q(1.36) ~ 0.049, Q(1.63) ~ 0.010
  CHECK(ks_tail(1.3581) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(ks_tail(1.6276) == doctest::Approx(0.01).epsilon(0.02));
  double c5 = ks_two_sample_critical(0.05, 1000, 1000);
  double c1 = ks_two_sample_critical(0.01, 1000, 1000);
  CHECK(c1 > c5);
  CHECK(c5 == doctest::Approx(1.3581 * std::sqrt(2.0 / 1000.0)).epsilon(0.05));
}

TEST_CASE("one-sample KS accepts its own distribution and rejects a shifted one") {
  RngStream rng(77, 0);
  std::vector<double> z(4000);
  for (auto& v : z) v = rng.normal();
  KsResult ok = ks_one_sample(z, [](double x) { return normal_cdf(x); });
  CHECK(ok.p_value > 0.01);
  KsResult bad = ks_one_sample(z, [](double x) { return normal_cdf(x - 0.25); });
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("two-sample KS behaves") {
  RngStream rng(78, 0);
  std::vector<double> a(3000), b(3000), c(3000);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = rng.normal();
  for (auto& v : c) v = 1.2 * rng.normal();
  KsResult same = ks_two_sample(a, b);
  CHECK(same.statistic < ks_two_sample_critical(0.01, 3000, 3000));
  KsResult diff = ks_two_sample(a, c);
  CHECK(diff.statistic > ks_two_sample_critical(0.01, 3000, 3000));
}
