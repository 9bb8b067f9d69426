#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ousp/phi.hpp"
#include "ousp/semigroup.hpp"

using namespace ousp;

namespace {
const ModelParams kP(1.3, 0.7, 1.0, 0.5, 2);
const Polynomial kF = Polynomial::parse("x1^3 - 2 x1 x2 + 0.5 x2^2 - 1", 2);
}  // namespace

TEST_CASE("one-step closed forms") {
  ModelParams p(1, 1, 1, 1, 1);
  SemigroupAction sg(p);
  double t = 0.8;
  double m = std::exp(-t), v = 0.5 * (1 - std::exp(-2 * t));
  CHECK(sg.bridge_variance(t) == doctest::Approx(v).epsilon(1e-14));
  Polynomial x = Polynomial::variable(0, 1);
  // P_t x = e^{-mu t} x, P_t x^2 = e^{-2 mu t} x^2 + v(t)
  CHECK(sg.apply(x, t).max_coeff_diff(x * m) < 1e-15);
  Polynomial x2t = x * x * (m * m) + Polynomial::constant(v, 1);
  CHECK(sg.apply(x * x, t).max_coeff_diff(x2t) < 1e-15);
}

TEST_CASE("semigroup law P_s P_t = P_{s+t}") {
  SemigroupAction sg(kP);
  for (double s : {0.3, 1.1})
    for (double t : {0.5, 2.0}) {
      Polynomial a = sg.apply(sg.apply(kF, t), s);
      Polynomial b = sg.apply(kF, s + t);
      CHECK(a.max_coeff_diff(b) < 1e-12 * (1 + b.coeff_norm()));
    }
}

TEST_CASE("invariance of phi") {
  SemigroupAction sg(kP);
  double base = phi_integral(kF, kP);
  for (double t : {0.25, 1.0, 4.0, 16.0})
    CHECK(phi_integral(sg.apply(kF, t), kP) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("long-time limit is the phi average") {
  SemigroupAction sg(kP);
  Polynomial lim = sg.apply(kF, 60.0);
  Polynomial target = Polynomial::constant(phi_integral(kF, kP), 2);
  CHECK(lim.max_coeff_diff(target) < 1e-10);
}

TEST_CASE("weighted action is a scalar factor") {
  SemigroupAction sg(kP);
  double t = 1.7, a = 0.9;
  Polynomial w = sg.apply(kF, t, a);
  Polynomial u = sg.apply(kF, t) * std::exp(a * t);
  CHECK(w.max_coeff_diff(u) < 1e-12 * (1 + u.coeff_norm()));
}

TEST_CASE("degree never increases") {
  SemigroupAction sg(kP);
  CHECK(sg.apply(kF, 0.9).degree() <= kF.degree());
  CHECK(sg.apply(kF, 0.0).max_coeff_diff(kF) == 0.0);
}

TEST_CASE("gradient profile error vanishes for linear f and decays otherwise") {
  ModelParams p(1, 1, 3, 1, 1);  // fast regime params, mu = 1
  SemigroupAction sg(p);
  Polynomial x = Polynomial::variable(0, 1);
  CHECK(sg.gradient_profile_error(x, {0.7}, 2.0) < 1e-13);
  Polynomial f = Polynomial::parse("x1 + 0.3 x1^2", 1);
  double e1 = sg.gradient_profile_error(f, {0.7}, 2.0);
  double e2 = sg.gradient_profile_error(f, {0.7}, 4.0);
  CHECK(e2 < 0.2 * e1);  // e^{-mu t} decay of the nonlinear part
}
