#include "ousp/particle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ousp {

namespace {

struct Motion {
  double mu, statvar;
  void advance(double* x, int dim, double dt, RngStream& rng) const {
    double m = std::exp(-mu * dt);
    double sd = std::sqrt(statvar * (1.0 - m * m));
    for (int j = 0; j < dim; ++j) x[j] = x[j] * m + sd * rng.normal();
  }
};

}  // namespace

void simulate_with_checkpoints(const AtomicMeasure& nu, const std::vector<double>& checkpoints,
                               long long n, Mechanism mech, const ModelParams& p, RngStream& rng,
                               const std::function<void(const ParticleSystem&)>& observe,
                               long long pop_cap) {
  if (n < 1) throw std::invalid_argument("simulate_superprocess: n must be >= 1");
  double rate = 2.0 * p.beta * (double)n;  // per-particle event rate
  if (!(rate > p.alpha))
    throw std::invalid_argument("simulate_superprocess: resolution too small, need 2*beta*n > alpha");
  if (nu.dim() != p.dim) throw std::invalid_argument("simulate_superprocess: dimension mismatch");
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 0.0 || (i > 0 && checkpoints[i] < checkpoints[i - 1]))
      throw std::invalid_argument("simulate_superprocess: checkpoints must be sorted and >= 0");
  }

  double a = p.alpha / rate;
  double p_death = mech == Mechanism::Super ? 0.5 * (1.0 - a) : 0.5 * (1.0 + a);
  Motion mo{p.mu, p.stationary_var()};
  int d = p.dim;

  ParticleSystem st;
  st.dim = d;
  st.n = n;
  st.mech = mech;
  std::vector<double> last_t;  // per-particle time of last position update
  for (const auto& atom : nu.atoms()) {
    long long cnt = (long long)std::floor((double)n * atom.mass);
    for (long long c = 0; c < cnt; ++c) {
      for (int j = 0; j < d; ++j) st.pos.push_back(atom.x[j]);
      last_t.push_back(0.0);
    }
  }

  double now = 0.0;
  for (double t_obs : checkpoints) {
    while (!st.pos.empty()) {
      long long cnt = st.count();
      double dt = rng.exponential(rate * (double)cnt);
      if (now + dt > t_obs) break;
      now += dt;
      long long idx = (long long)(rng.uniform() * (double)cnt);
      if (idx >= cnt) idx = cnt - 1;
      double* x = &st.pos[idx * d];
      mo.advance(x, d, now - last_t[idx], rng);
      last_t[idx] = now;
      if (rng.bernoulli(p_death)) {
        // swap-remove
        long long last = cnt - 1;
        for (int j = 0; j < d; ++j) st.pos[idx * d + j] = st.pos[last * d + j];
        last_t[idx] = last_t[last];
        st.pos.resize(last * d);
        last_t.resize(last);
      } else {
        for (int j = 0; j < d; ++j) st.pos.push_back(x[j]);
        last_t.push_back(now);
        if (cnt + 1 > pop_cap) {
          st.aborted = true;
          st.abort_time = now;
          st.current_time = now;
          observe(st);
          return;
        }
      }
    }
    // synchronize all positions at the checkpoint
    for (long long i = 0; i < st.count(); ++i) {
      mo.advance(&st.pos[i * d], d, t_obs - last_t[i], rng);
      last_t[i] = t_obs;
    }
    now = t_obs;
    st.current_time = t_obs;
    observe(st);
  }
}

ParticleSystem simulate_superprocess(const AtomicMeasure& nu, double t_end, long long n,
                                     Mechanism mech, const ModelParams& p, RngStream& rng,
                                     long long pop_cap) {
  ParticleSystem out;
  simulate_with_checkpoints(
      nu, {t_end}, n, mech, p, rng, [&](const ParticleSystem& st) { out = st; }, pop_cap);
  return out;
}

Functionals evaluate_functionals(const ParticleSystem& st, const Polynomial& f,
                                 const ModelParams& p) {
  Functionals out;
  out.h_value.assign(st.dim, 0.0);
  CompiledPoly cf(f);
  double inv_n = 1.0 / (double)st.n;
  double sum_f = 0.0;
  std::vector<double> sum_x(st.dim, 0.0);
  for (long long i = 0; i < st.count(); ++i) {
    const double* x = &st.pos[i * st.dim];
    sum_f += cf.eval(x);
    for (int j = 0; j < st.dim; ++j) sum_x[j] += x[j];
  }
  out.mass = st.total_mass();
  out.integral_f = sum_f * inv_n;
  double w = std::exp(-(p.alpha - p.mu) * st.current_time);
  for (int j = 0; j < st.dim; ++j) out.h_value[j] = w * sum_x[j] * inv_n;
  return out;
}

void dump_snapshot(const ParticleSystem& st, const std::string& csv_path,
                   const std::string& json_path, uint64_t seed, uint64_t stream) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("dump_snapshot: cannot open " + csv_path);
  csv << "particle_index";
  for (int j = 0; j < st.dim; ++j) csv << ",x" << j + 1;
  csv << "\n";
  char buf[40];
  for (long long i = 0; i < st.count(); ++i) {
    csv << i;
    for (int j = 0; j < st.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", st.pos[i * st.dim + j]);
      csv << "," << buf;
    }
    csv << "\n";
  }
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("dump_snapshot: cannot open " + json_path);
  js << "{\"t\": " << st.current_time << ", \"n\": " << st.n << ", \"mech\": \""
     << (st.mech == Mechanism::Super ? "super" : "sub") << "\", \"seed\": " << seed
     << ", \"stream\": " << stream << ", \"dim\": " << st.dim
     << ", \"count\": " << st.count() << ", \"aborted\": " << (st.aborted ? "true" : "false")
     << "}\n";
}

}  // namespace ousp
