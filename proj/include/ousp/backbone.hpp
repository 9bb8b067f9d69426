#pragma once

#include <string>
#include <vector>

#include "ousp/measure.hpp"
#include "ousp/model.hpp"
#include "ousp/particle.hpp"
#include "ousp/rng.hpp"

namespace ousp {

// Supercritical binary branching OU system: every particle lives an Exp(alpha)
// lifetime and is replaced in place by two children.  Ulam-Harris labels, so
// the genealogy is replayable.
struct BackboneParticle {
  std::vector<int> label;  // root index, then 1/2 per generation
  std::vector<double> pos;
  double birth_time = 0.0;
};

struct BackboneEvent {
  double time = 0.0;
  std::vector<int> parent;      // label of the particle that split (or, for the
                                // final synchronization records, the particle itself)
  std::vector<double> pos;      // position at the event
  bool is_final = false;        // true for the end-of-run position records
};

struct BackboneState {
  double current_time = 0.0;
  bool aborted = false;
  double abort_time = 0.0;
  std::vector<BackboneParticle> particles;  // positions synchronized at current_time
  std::vector<double> split_times;          // every split, in time order
  std::vector<BackboneEvent> log;           // filled only when keep_log is set
};

struct MartingalePair {
  double W = 0.0;               // e^{-alpha t} |z_t|
  std::vector<double> I;        // e^{-(alpha-mu) t} sum of positions
};

BackboneState simulate_backbone(const AtomicMeasure& gamma, double t_end, const ModelParams& p,
                                RngStream& rng, bool keep_log = false,
                                long long pop_cap = kDefaultPopulationCap);

MartingalePair backbone_martingales(const BackboneState& st, const ModelParams& p);

// particle count at time s <= current_time, reconstructed from split times
long long backbone_count_at(const BackboneState& st, long long initial, double s);

// line-delimited event log: time, parent label, child labels, position
void dump_event_log(const BackboneState& st, const std::string& path);

}  // namespace ousp
