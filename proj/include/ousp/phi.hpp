#pragma once

#include <vector>

#include "ousp/model.hpp"
#include "ousp/polynomial.hpp"

namespace ousp {

// Moments of the invariant Gaussian measure phi (centered, per-coordinate
// variance sigma^2/(2 mu)) and the derived functionals built on them.

// E G^m for a centered one-dimensional Gaussian with the given variance.
double gaussian_moment_1d(int m, double var);

// Integral of x^k against phi.
double gaussian_moment(const ModelParams& p, const MultiIndex& k);

// <f, phi>
double phi_integral(const Polynomial& f, const ModelParams& p);

// f - <f, phi>
Polynomial center(const Polynomial& f, const ModelParams& p);

// j-th entry: integral of d_j f against phi
std::vector<double> grad_inner(const Polynomial& f, const ModelParams& p);

}  // namespace ousp
