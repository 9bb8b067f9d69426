#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ousp/measure.hpp"
#include "ousp/model.hpp"
#include "ousp/phi.hpp"
#include "ousp/polynomial.hpp"

using namespace ousp;

TEST_CASE("regime classification follows sign of alpha - 2 mu") {
  CHECK(ModelParams(1, 1, 1, 0.5, 1).regime() == Regime::Slow);
  CHECK(ModelParams(1, 1, 2, 1, 1).regime() == Regime::Critical);
  CHECK(ModelParams(1, 1, 3, 1, 1).regime() == Regime::Fast);
  CHECK(ModelParams::critical(1.5, 0.7, 2.0, 3).regime() == Regime::Critical);
  CHECK(std::string(regime_name(Regime::Slow)) == "slow");
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams(0, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, -1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, 1, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, 1, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, 1, 1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, 1, 1, 1, 4), std::invalid_argument);
}

TEST_CASE("derived quantities") {
  ModelParams p(2, 0.5, 1, 0.25, 2);
  CHECK(p.lambda_star() == doctest::Approx(4.0));           // alpha/beta
  CHECK(p.stationary_var() == doctest::Approx(4.0));        // sigma^2/(2 mu)
}

TEST_CASE("polynomial algebra and evaluation") {
  Polynomial x = Polynomial::variable(0, 2);
  Polynomial y = Polynomial::variable(1, 2);
  Polynomial f = x * x + y * 3.0 + Polynomial::constant(-2.0, 2);
  std::vector<double> pt = {2.0, -1.0};
  CHECK(f.eval(pt) == doctest::Approx(4.0 - 3.0 - 2.0));
  CHECK((f * f).eval(pt) == doctest::Approx(1.0));
  CHECK((f - f).is_zero());
  CHECK(f.partial(0).eval(pt) == doctest::Approx(4.0));
  CHECK(f.partial(1).eval(pt) == doctest::Approx(3.0));
  CHECK(f.degree() == 2);
}

TEST_CASE("parse round-trips and rejects junk") {
  for (const char* s : {"x1", "x1^2 - 0.5", "2 x1^3 + x2 x3 - 4", "-x1 + 0.25 x1^5"}) {
    int dim = 3;
    Polynomial f = Polynomial::parse(s, dim);
    Polynomial g = Polynomial::parse(f.to_string(), dim);
    CHECK(f.max_coeff_diff(g) == 0.0);
  }
  CHECK_THROWS_AS(Polynomial::parse("x4", 3), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial::parse("x1^9", 1), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial::parse("1 +", 1), std::invalid_argument);
}

TEST_CASE("compiled evaluation matches the map form") {
  Polynomial f = Polynomial::parse("1.5 x1^3 x2 - x2^2 + 0.125", 2);
  CompiledPoly cf(f);
  for (double a : {-1.5, 0.0, 2.0})
    for (double b : {-0.5, 1.0}) {
      double pt[2] = {a, b};
      CHECK(cf.eval(pt) == doctest::Approx(f.eval(pt)).epsilon(1e-14));
    }
}

TEST_CASE("gaussian moments of the invariant measure") {
  // per-coordinate variance sigma^2/(2 mu) = 0.5
  ModelParams p(1, 1, 1, 1, 1);
  CHECK(gaussian_moment_1d(0, 0.5) == doctest::Approx(1.0));
  CHECK(gaussian_moment_1d(1, 0.5) == doctest::Approx(0.0));
  CHECK(gaussian_moment_1d(2, 0.5) == doctest::Approx(0.5));
  CHECK(gaussian_moment_1d(4, 0.5) == doctest::Approx(3 * 0.25));
  CHECK(gaussian_moment_1d(6, 0.5) == doctest::Approx(15 * 0.125));
  Polynomial f = Polynomial::parse("x1^2 - 0.5", 1);
  CHECK(phi_integral(f, p) == doctest::Approx(0.0));
  CHECK(phi_integral(center(Polynomial::parse("x1^4", 1), p), p) == doctest::Approx(0.0));
}

TEST_CASE("grad_inner integrates the gradient against phi") {
  ModelParams p(1, 1, 2, 1, 2);
  Polynomial f = Polynomial::parse("x1 + 3 x2^2", 2);
  std::vector<double> g = grad_inner(f, p);
  REQUIRE(g.size() == 2);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(0.0));  // <6 x2, phi> = 0
}

TEST_CASE("atomic measures") {
  AtomicMeasure m(2);
  m.add_atom({0.0, 1.0}, 0.5);
  m.add_atom({1.0, -1.0}, 1.5);
  CHECK(m.total_mass() == doctest::Approx(2.0));
  CHECK(m.atoms().size() == 2);
  CHECK_THROWS_AS(m.add_atom({0.0, 0.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(m.add_atom({0.0}, 1.0), std::invalid_argument);
}
