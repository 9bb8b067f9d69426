#pragma once

#include <vector>

#include "ousp/measure.hpp"
#include "ousp/model.hpp"
#include "ousp/polynomial.hpp"
#include "ousp/rng.hpp"

namespace ousp {

// Mass-chain view of the particle scheme: a linear birth-death chain with
// per-particle birth rate lam = beta n (1 + a) and death rate mud =
// beta n (1 - a), a = alpha/(2 beta n) (signs flip under Sub).  Branching is
// independent of motion, so the chain is autonomous and its transition law is
// classical: extinction probability E(u), survivors geometric given survival.
struct BirthDeathChain {
  double lam = 0.0, mud = 0.0, delta = 0.0;  // delta = lam - mud = +-alpha

  static BirthDeathChain for_scheme(const ModelParams& p, long long n, Mechanism mech);

  double extinct_prob(double u) const;  // E(u), single ancestor
  double survival(double u) const;      // S(u) = 1 - E(u)
  double geom_b(double u) const;        // survivor count is Geometric(1-b) given survival

  // Exact-law population after dt more time units, given m particles now.
  long long forward_population(long long m, double dt, RngStream& rng) const;
};

// Functional sums over the time-T particle population, drawn from the exact
// law without visiting lineages that die out before T.  The genealogy
// restricted to individuals with descendants alive at T is a binary tree
// whose per-lineage branch times have an explicit inhomogeneous hazard
// lam * S(remaining), invertible in closed form; motion is attached along
// the reduced edges by exact OU transitions.  Law-equivalence against the
// event-driven simulator is established by the distribution tests.
struct ReducedSample {
  long long count = 0;            // particles alive at T
  std::vector<double> sums;       // one Sum f(x_i) per requested functional
  std::vector<double> sum_x;      // coordinate sums
  bool aborted = false;           // leaf budget exceeded
};

ReducedSample sample_population_at(const AtomicMeasure& nu, double T, long long n, Mechanism mech,
                                   const ModelParams& p, const std::vector<CompiledPoly>& fs,
                                   RngStream& rng, long long leaf_cap = 50'000'000);

}  // namespace ousp
