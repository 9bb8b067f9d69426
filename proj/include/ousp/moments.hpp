#pragma once

#include <utility>
#include <vector>

#include "ousp/measure.hpp"
#include "ousp/model.hpp"
#include "ousp/polynomial.hpp"
#include "ousp/rng.hpp"
#include "ousp/semigroup.hpp"

namespace ousp {

// One Faa di Bruno partition class: m = (m_1,...,m_k) with sum j*m_j = k,
// coeff = k! / prod(m_j! (j!)^{m_j}).
struct PartitionTerm {
  std::vector<int> m;
  long long coeff;
};

// Complete enumeration of A_k, lexicographically descending in m.
std::vector<PartitionTerm> faa_di_bruno_terms(int k);

enum class MomentKind { USuper, USub, VBackbone };

struct MomentResult {
  double value = 0.0;
  // Quadrature error, accumulated through all nested layers as a coefficient
  // L1 bound (valid pointwise on the unit box).  Exactly 0 for k = 1.
  double abs_error_estimate = 0.0;
  int k = 0;
  MomentKind kind = MomentKind::USuper;
};

// Analytic moment functionals of the process.  All time integrals are
// adaptive Gauss-Legendre; space is handled exactly by the semigroup action,
// so a k-th moment costs k-1 nested quadrature layers.
//
// The k-th derivative recursion is implemented from the general Faa di Bruno
// form (only |m| = 2 partition classes survive for a quadratic mechanism).
// The source derivation's written-out k = 4 special case disagrees with that
// general form; the general form is the one matching the closed-form
// total-mass moments (see the f = 1 oracle in the tests), so it is used.
class MomentEngine {
 public:
  explicit MomentEngine(const ModelParams& p, double abs_tol = 1e-10, double rel_tol = 1e-12);

  const SemigroupAction& semigroup() const noexcept { return sg_; }
  const ModelParams& params() const noexcept { return p_; }

  // u_f^k (Super) or u*_f^k (Sub) evaluated at (x, t).
  // Throws std::runtime_error if the quadrature fails to converge.
  MomentResult u_moment(const Polynomial& f, const std::vector<double>& x, double t, int k,
                        Mechanism mech) const;

  // V_f^k at (x, t); E <f, Lambda_t>^k = (-1)^k V_f^k.
  MomentResult backbone_moment(const Polynomial& f, const std::vector<double>& x, double t,
                               int k) const;

  // polynomial-in-x forms plus error bound, used by the variance module
  std::pair<Polynomial, double> u_poly(const Polynomial& f, double t, int k, Mechanism mech) const;
  std::pair<Polynomial, double> v_poly(const Polynomial& f, double t, int k) const;

  // quadrature-stability knob (tests): start every layer from this many panels
  void set_initial_panels(int n) { initial_panels_ = n; }

 private:
  struct Ctx;
  std::pair<Polynomial, double> u_rec(Ctx& ctx, double t, int k, Mechanism mech) const;
  std::pair<Polynomial, double> v_rec(Ctx& ctx, double t, int k) const;

  ModelParams p_;
  SemigroupAction sg_;
  double abs_tol_, rel_tol_;
  int initial_panels_ = 1;
};

// v_theta(t): the total-mass log-Laplace exponent, E_nu e^{-theta |X_t|} =
// exp(-|nu| v_theta(t)).
double total_mass_laplace(double theta, double t, const ModelParams& p);

double extinction_probability(double total_mass, const ModelParams& p);

// One draw of V_infty: Poisson(|nu| alpha/beta) many Exp(alpha/beta) summands.
double sample_v_infinity(double total_mass, const ModelParams& p, RngStream& rng);

// E_nu <f, D_t^s> = e^{alpha(s-t)} integral of P_{t+s} f against nu.
double dressing_mean(const Polynomial& f, const AtomicMeasure& nu, double s, double t,
                     const SemigroupAction& sg);

}  // namespace ousp
