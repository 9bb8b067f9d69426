#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ousp/measure.hpp"
#include "ousp/model.hpp"
#include "ousp/polynomial.hpp"
#include "ousp/rng.hpp"

namespace ousp {

inline constexpr long long kDefaultPopulationCap = 2'000'000;

// Branching-particle approximation at resolution n (mass 1/n per particle).
// Branching: per-particle event rate 2 beta n; at an event the particle dies
// with probability (1 -+ alpha/(2 beta n))/2 (Super: '-', Sub: '+') and is
// replaced by two particles at its position otherwise.  This calibration
// matches the drift alpha*m and quadratic-variation rate 2*beta*m of the
// limiting mass diffusion exactly.  Motion: exact OU transitions, no
// discretization anywhere.
struct ParticleSystem {
  int dim = 1;
  long long n = 1;
  Mechanism mech = Mechanism::Super;
  double current_time = 0.0;
  bool aborted = false;     // population cap hit; state is the partial state
  double abort_time = 0.0;  // event time at which the cap was exceeded
  std::vector<double> pos;  // dim-strided particle positions

  long long count() const { return (long long)pos.size() / dim; }
  double total_mass() const { return (double)count() / (double)n; }
  bool survived() const { return !pos.empty(); }
};

struct Functionals {
  double mass = 0.0;
  double integral_f = 0.0;
  std::vector<double> h_value;  // e^{-(alpha-mu)t} <X_t, id>, one entry per coordinate
};

ParticleSystem simulate_superprocess(const AtomicMeasure& nu, double t_end, long long n,
                                     Mechanism mech, const ModelParams& p, RngStream& rng,
                                     long long pop_cap = kDefaultPopulationCap);

// Same dynamics, observed at several increasing times on one trajectory.
// The callback sees the synchronized state at each checkpoint; simulation
// stops early if the population cap is hit (state.aborted set).
void simulate_with_checkpoints(const AtomicMeasure& nu, const std::vector<double>& checkpoints,
                               long long n, Mechanism mech, const ModelParams& p, RngStream& rng,
                               const std::function<void(const ParticleSystem&)>& observe,
                               long long pop_cap = kDefaultPopulationCap);

Functionals evaluate_functionals(const ParticleSystem& st, const Polynomial& f,
                                 const ModelParams& p);

// Snapshot dump: CSV of particle positions plus a JSON sidecar header.
void dump_snapshot(const ParticleSystem& st, const std::string& csv_path,
                   const std::string& json_path, uint64_t seed, uint64_t stream);

}  // namespace ousp
