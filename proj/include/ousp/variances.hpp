#pragma once

#include <string>
#include <vector>

#include "ousp/model.hpp"
#include "ousp/moments.hpp"
#include "ousp/polynomial.hpp"

namespace ousp {

struct VarianceResult {
  double sigma_sq = 0.0;
  Regime regime = Regime::Slow;
  double tail_bound = 0.0;  // truncation error of the improper time integral
  std::string method;       // "quadrature" or "closed_form"
};

// Limit variance of the slow regime (alpha < 2 mu):
//   sigma_f^2 = (beta/alpha) int_0^inf e^{-as} <phi, 2b (P_s^a f~)^2
//               - 2b (P_s^{-a} f~)^2 - 2a u*_{f~}^2(., s)> ds,
// the third term written through the subcritical second moment
// (u*^2 = -2 beta int P^{-a}[(P^{-a} f~)^2], checked in the tests).
VarianceResult sigma_slow(const Polynomial& f, const ModelParams& p, double tol = 1e-10);

// Critical regime (alpha = 2 mu): 2 beta^2/alpha * int (x . <grad f, phi>)^2 phi dx.
// quadrature_path = true replaces the Gaussian-moment closed form by a direct
// numeric x-integral (cross-check route).
VarianceResult sigma_critical(const Polynomial& f, const ModelParams& p,
                              bool quadrature_path = false);

struct FastBoundReport {
  double max_value = 0.0;
  bool stabilized_after_burnin = true;
  // values[i][j] = e^{-2(alpha-mu)t_j} |V_{f~}^2(x_i, t_j)|
  std::vector<std::vector<double>> values;
};

// Fast regime (alpha > 2 mu): grid evaluation of the normalized second moment
// and a stabilization check: the value rises to a finite limit, so successive
// increments must decay geometrically once t >= 2 at fixed x.
FastBoundReport fast_regime_bound_check(const Polynomial& f, const ModelParams& p,
                                        const std::vector<std::vector<double>>& x_grid,
                                        const std::vector<double>& t_grid);

}  // namespace ousp
