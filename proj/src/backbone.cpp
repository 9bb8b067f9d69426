#include "ousp/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <stdexcept>

namespace ousp {

namespace {

std::string label_str(const std::vector<int>& label) {
  std::string s;
  for (size_t i = 0; i < label.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(label[i]);
  }
  return s;
}

}  // namespace

BackboneState simulate_backbone(const AtomicMeasure& gamma, double t_end, const ModelParams& p,
                                RngStream& rng, bool keep_log, long long pop_cap) {
  if (t_end < 0.0) throw std::invalid_argument("simulate_backbone: t_end must be >= 0");
  if (!gamma.empty() && gamma.dim() != p.dim)
    throw std::invalid_argument("simulate_backbone: dimension mismatch");
  for (const auto& atom : gamma.atoms())
    if (atom.mass != 1.0) throw std::invalid_argument("simulate_backbone: atoms must have unit mass");

  const int d = p.dim;
  const double statvar = p.stationary_var();
  auto advance = [&](std::vector<double>& x, double dt) {
    double m = std::exp(-p.mu * dt);
    double sd = std::sqrt(statvar * (1.0 - m * m));
    for (int j = 0; j < d; ++j) x[j] = x[j] * m + sd * rng.normal();
  };

  BackboneState st;
  std::vector<BackboneParticle> alive;
  using QE = std::pair<double, size_t>;  // (death time, index into alive)
  std::priority_queue<QE, std::vector<QE>, std::greater<>> deaths;

  int root = 0;
  for (const auto& atom : gamma.atoms()) {
    BackboneParticle bp;
    bp.label = {root++};
    bp.pos = atom.x;
    bp.birth_time = 0.0;
    alive.push_back(bp);
    deaths.emplace(rng.exponential(p.alpha), alive.size() - 1);
  }

  while (!deaths.empty() && deaths.top().first <= t_end) {
    auto [td, idx] = deaths.top();
    deaths.pop();
    BackboneParticle parent = alive[idx];
    advance(parent.pos, td - parent.birth_time);
    st.split_times.push_back(td);
    if (keep_log) st.log.push_back({td, parent.label, parent.pos, false});
    for (int child = 1; child <= 2; ++child) {
      BackboneParticle c;
      c.label = parent.label;
      c.label.push_back(child);
      c.pos = parent.pos;
      c.birth_time = td;
      size_t slot;
      if (child == 1) {
        alive[idx] = c;
        slot = idx;
      } else {
        alive.push_back(c);
        slot = alive.size() - 1;
      }
      deaths.emplace(td + rng.exponential(p.alpha), slot);
    }
    if ((long long)alive.size() > pop_cap) {
      st.aborted = true;
      st.abort_time = td;
      st.current_time = td;
      st.particles = std::move(alive);
      return st;
    }
  }

  for (auto& bp : alive) {
    advance(bp.pos, t_end - bp.birth_time);
    // positions are now synchronized at t_end; birth_time is kept as metadata
    if (keep_log) st.log.push_back({t_end, bp.label, bp.pos, true});
  }
  st.current_time = t_end;
  st.particles = std::move(alive);
  return st;
}

MartingalePair backbone_martingales(const BackboneState& st, const ModelParams& p) {
  MartingalePair mp;
  mp.I.assign(p.dim, 0.0);
  mp.W = std::exp(-p.alpha * st.current_time) * (double)st.particles.size();
  double w = std::exp(-(p.alpha - p.mu) * st.current_time);
  for (const auto& bp : st.particles)
    for (int j = 0; j < p.dim; ++j) mp.I[j] += w * bp.pos[j];
  return mp;
}

long long backbone_count_at(const BackboneState& st, long long initial, double s) {
  auto it = std::upper_bound(st.split_times.begin(), st.split_times.end(), s);
  return initial + (long long)(it - st.split_times.begin());
}

void dump_event_log(const BackboneState& st, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_event_log: cannot open " + path);
  out << "time parent children pos\n";
  char buf[40];
  for (const auto& ev : st.log) {
    std::snprintf(buf, sizeof(buf), "%.17g", ev.time);
    out << buf << ' ' << label_str(ev.parent) << ' ';
    if (ev.is_final)
      out << label_str(ev.parent);
    else
      out << label_str(ev.parent) << ".1," << label_str(ev.parent) << ".2";
    for (double x : ev.pos) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

}  // namespace ousp
