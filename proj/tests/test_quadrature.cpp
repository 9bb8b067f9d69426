#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ousp/quadrature.hpp"

using namespace ousp;

TEST_CASE("scalar integrals against closed forms") {
  ScalarQuad q = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(q.converged);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::fabs(q.value - 2.0) <= q.abs_error + 1e-13);

  q = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
  CHECK(q.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

  // mildly nasty: sharp peak away from panel boundaries
  q = integrate([](double x) { return 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)); }, 0.0, 1.0);
  double exact = (std::atan(0.7 / 1e-2) + std::atan(0.3 / 1e-2)) / 1e-2;
  CHECK(q.converged);
  CHECK(q.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("zero-length interval and tolerance scaling") {
  ScalarQuad q = integrate([](double x) { return x; }, 2.0, 2.0);
  CHECK(q.value == 0.0);
  // huge magnitudes: relative tolerance must carry the burden
  q = integrate([](double x) { return std::exp(x); }, 0.0, 40.0, 1e-8, 1e-12);
  double exact = std::exp(40.0) - 1.0;
  CHECK(q.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("polynomial-valued integration, coefficientwise") {
  // int_0^1 (x1^2 s^2 + x1 s + 1) ds = x1^2/3 + x1/2 + 1
  Polynomial x = Polynomial::variable(0, 1);
  PolyQuad q = integrate_poly(
      [&](double s) { return std::make_pair(x * x * (s * s) + x * s + Polynomial::constant(1.0, 1),
                                            0.0); },
      0.0, 1.0, 1);
  CHECK(q.converged);
  Polynomial target = x * x * (1.0 / 3.0) + x * 0.5 + Polynomial::constant(1.0, 1);
  CHECK(q.value.max_coeff_diff(target) < 1e-12);
  CHECK(q.abs_error < 1e-10);
}

TEST_CASE("node error bounds propagate into the total") {
  Polynomial one = Polynomial::constant(1.0, 1);
  PolyQuad q = integrate_poly([&](double s) { return std::make_pair(one * std::cos(s), 1e-9); },
                              0.0, 2.0, 1);
  // integrand carries a pointwise error bound of 1e-9 over length 2
  CHECK(q.abs_error >= 2e-9 * 0.99);
  CHECK(q.value.eval(std::vector<double>{0.0}) == doctest::Approx(std::sin(2.0)).epsilon(1e-10));
}

TEST_CASE("initial panel count does not move the answer") {
  auto fn = [](double s) {
    Polynomial x = Polynomial::variable(0, 1);
    return std::make_pair(x * std::exp(-s) + Polynomial::constant(std::sin(3 * s), 1), 0.0);
  };
  PolyQuad a = integrate_poly(fn, 0.0, 5.0, 1, 1e-10, 1e-12, 20, 1);
  PolyQuad b = integrate_poly(fn, 0.0, 5.0, 1, 1e-10, 1e-12, 20, 7);
  CHECK(a.value.max_coeff_diff(b.value) <= a.abs_error + b.abs_error + 1e-13);
}
