#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ousp/moments.hpp"
#include "ousp/variances.hpp"

using namespace ousp;

TEST_CASE("slow-regime variance against a hand-integrated oracle") {
  // sigma = mu = alpha = 1, beta arbitrary, f = x.  The defining integral
  // evaluates in closed form:
  //   integrand(s) = beta (e^{-s} - e^{-5s}) + (2 beta/3)(e^{-2s} - e^{-5s})
  // whose integral over (0, inf) is beta (0.8 + 0.2) = beta.  This also
  // matches the exact second moment Var<x, X_t> = 2 beta (cosh t - 1) ~
  // beta e^t together with E V_infty = 1.
  for (double beta : {0.5, 0.25}) {
    ModelParams p(1, 1, 1, beta, 1);
    Polynomial f = Polynomial::variable(0, 1);
    VarianceResult r = sigma_slow(f, p);
    CHECK(r.sigma_sq == doctest::Approx(beta).epsilon(1e-9));
    CHECK(r.tail_bound < 1e-8);
  }
}

TEST_CASE("slow-regime variance matches the skeleton second-moment limit") {
  ModelParams p(1.2, 0.9, 0.8, 0.5, 1);
  Polynomial f = Polynomial::parse("x1 + 0.5 x1^2", 1);
  double s2 = sigma_slow(f, p).sigma_sq;
  MomentEngine eng(p);
  Polynomial ft = center(f, p);
  double t = 30.0;  // e^{(alpha-2mu)t} = e^{-30}
  double v2 = eng.backbone_moment(ft, {0.0}, t, 2).value;
  CHECK((p.alpha / p.beta) * std::exp(-p.alpha * t) * v2 == doctest::Approx(s2).epsilon(1e-8));
}

TEST_CASE("slow-regime variance scaling and shift invariance") {
  ModelParams p(1, 1, 1, 0.5, 1);
  Polynomial f = Polynomial::parse("x1^2", 1);
  double base = sigma_slow(f, p).sigma_sq;
  CHECK(sigma_slow(f * 3.0, p).sigma_sq == doctest::Approx(9.0 * base).epsilon(1e-9));
  Polynomial shifted = f + Polynomial::constant(7.0, 1);
  CHECK(sigma_slow(shifted, p).sigma_sq == doctest::Approx(base).epsilon(1e-9));
  Polynomial constf = Polynomial::constant(4.0, 1);
  CHECK(sigma_slow(constf, p).sigma_sq == 0.0);
}

TEST_CASE("critical closed form: value, scaling, quadrature agreement") {
  ModelParams p(1, 1, 2, 1, 1);
  Polynomial x = Polynomial::variable(0, 1);
  // 2 beta <grad f, phi>^2 <x^2, phi> = 2 * 1 * 1 * 0.5
  CHECK(sigma_critical(x, p).sigma_sq == doctest::Approx(1.0).epsilon(1e-12));
  // f = x^3: <3x^2, phi> = 3/2, so 2 * (3/2)^2 * 0.5 = 2.25
  Polynomial x3 = Polynomial::parse("x1^3", 1);
  CHECK(sigma_critical(x3, p).sigma_sq == doctest::Approx(2.25).epsilon(1e-12));
  for (const Polynomial& f : {x, x3}) {
    double a = sigma_critical(f, p, false).sigma_sq;
    double b = sigma_critical(f, p, true).sigma_sq;
    CHECK(std::fabs(a - b) / a < 1e-10);
  }
  // even f has zero gradient average: degenerate limit
  CHECK(sigma_critical(Polynomial::parse("x1^2", 1), p).sigma_sq == doctest::Approx(0.0));
}

TEST_CASE("critical variance matches the skeleton second-moment growth") {
  ModelParams p(1, 1, 2, 1, 1);
  Polynomial x = Polynomial::variable(0, 1);
  double s2 = sigma_critical(x, p).sigma_sq;
  MomentEngine eng(p);
  double t = 40.0;
  double v2 = eng.backbone_moment(x, {0.0}, t, 2).value;
  // normalized second moment is 1 - (1 - e^{-2t})/(2t): remainder 1/(2t)
  CHECK((p.alpha / p.beta) * std::exp(-p.alpha * t) * v2 / t ==
        doctest::Approx(s2 * (1.0 - 1.0 / (2.0 * t))).epsilon(1e-8));
}

TEST_CASE("regime guards") {
  Polynomial x = Polynomial::variable(0, 1);
  CHECK_THROWS_AS(sigma_slow(x, ModelParams(1, 1, 2, 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(sigma_critical(x, ModelParams(1, 1, 1, 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(fast_regime_bound_check(x, ModelParams(1, 1, 2, 1, 1), {{0.0}}, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("fast-regime normalized second moment stabilizes") {
  ModelParams p(1, 1, 3, 1, 1);
  Polynomial f = Polynomial::parse("x1 + 0.2 x1^2", 1);
  FastBoundReport rep = fast_regime_bound_check(f, p, {{0.0}, {1.0}}, {1, 2, 3, 4, 5, 6});
  CHECK(rep.stabilized_after_burnin);
  // rises toward a finite limit: last increment much smaller than the first
  REQUIRE(rep.values[0].size() == 6);
  CHECK(std::fabs(rep.values[0][5] - rep.values[0][4]) <
        0.05 * std::fabs(rep.values[0][1] - rep.values[0][0]));
  CHECK(rep.max_value > 0.0);
  CHECK(std::isfinite(rep.max_value));
}
