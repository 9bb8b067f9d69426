#pragma once

#include <map>
#include <shared_mutex>
#include <vector>

#include "ousp/model.hpp"
#include "ousp/phi.hpp"
#include "ousp/polynomial.hpp"

namespace ousp {

// Action of the OU semigroup P_t (and its exponentially weighted version
// e^{at} P_t) on polynomials.  P_t f(x) = E f(x e^{-mu t} + G_t) with G_t
// centered Gaussian of per-coordinate variance v(t) = (sigma^2/2mu)(1 - e^{-2mu t}),
// so the action is exact coefficient algebra; no spatial quadrature anywhere.
class SemigroupAction {
 public:
  explicit SemigroupAction(const ModelParams& p) : p_(p) {}

  const ModelParams& params() const noexcept { return p_; }

  double bridge_variance(double t) const;

  // e^{at} P_t f, exact up to floating rounding.  Degree never increases.
  Polynomial apply(const Polynomial& f, double t, double a = 0.0) const;

  // | e^{mu t} P_t f~(x) - x . <grad f, phi> |
  double gradient_profile_error(const Polynomial& f, const std::vector<double>& x, double t) const;

 private:
  // central moments 0..kDegreeCap of the one-dimensional bridge Gaussian at t
  const std::vector<double>& bridge_moments(double t) const;

  ModelParams p_;
  mutable std::shared_mutex mtx_;
  mutable std::map<double, std::vector<double>> cache_;
};

}  // namespace ousp
