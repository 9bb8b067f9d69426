#pragma once

#include <functional>

#include "ousp/polynomial.hpp"

namespace ousp {

// Adaptive 15-point Gauss-Legendre with panel bisection.  The error estimate
// on a panel is the difference between the one-panel rule and its two halves.
// Convergence target per call: abs_tol + rel_tol * (scale of the result).

struct ScalarQuad {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
};

ScalarQuad integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-12, int max_depth = 24);

// Integrand returning a polynomial plus a scalar error bound on its own value
// (coefficient L1 norm).  Node errors are accumulated with the quadrature
// weights so nested layers report honest totals.
struct PolyQuad {
  Polynomial value;
  double abs_error = 0.0;
  bool converged = true;
};

using PolyIntegrand = std::function<std::pair<Polynomial, double>(double)>;

PolyQuad integrate_poly(const PolyIntegrand& f, double a, double b, int dim,
                        double abs_tol = 1e-10, double rel_tol = 1e-12, int max_depth = 20,
                        int initial_panels = 1);

}  // namespace ousp
