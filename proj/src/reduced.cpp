#include "ousp/reduced.hpp"

#include <cmath>
#include <stdexcept>

namespace ousp {

BirthDeathChain BirthDeathChain::for_scheme(const ModelParams& p, long long n, Mechanism mech) {
  double rate = 2.0 * p.beta * (double)n;
  if (!(rate > p.alpha))
    throw std::invalid_argument("BirthDeathChain: resolution too small, need 2*beta*n > alpha");
  double a = p.alpha / rate;
  double p_split = mech == Mechanism::Super ? 0.5 * (1.0 + a) : 0.5 * (1.0 - a);
  BirthDeathChain c;
  c.lam = rate * p_split;
  c.mud = rate * (1.0 - p_split);
  c.delta = c.lam - c.mud;
  return c;
}

double BirthDeathChain::extinct_prob(double u) const {
  if (u <= 0.0) return 0.0;
  double e = std::exp(delta * u);
  return mud * (e - 1.0) / (lam * e - mud);
}

double BirthDeathChain::survival(double u) const { return 1.0 - extinct_prob(u); }

double BirthDeathChain::geom_b(double u) const { return (lam / mud) * extinct_prob(u); }

long long BirthDeathChain::forward_population(long long m, double dt, RngStream& rng) const {
  if (m <= 0 || dt <= 0.0) return m;
  long long alive = rng.binomial(m, survival(dt));
  double b = geom_b(dt);
  long long total = 0;
  for (long long i = 0; i < alive; ++i) total += rng.geometric_count(b);
  return total;
}

namespace {

struct Node {
  double x[3];
  double u;  // remaining time to the horizon at segment start
};

}  // namespace

ReducedSample sample_population_at(const AtomicMeasure& nu, double T, long long n, Mechanism mech,
                                   const ModelParams& p, const std::vector<CompiledPoly>& fs,
                                   RngStream& rng, long long leaf_cap) {
  if (nu.dim() != p.dim) throw std::invalid_argument("sample_population_at: dimension mismatch");
  BirthDeathChain bd = BirthDeathChain::for_scheme(p, n, mech);
  const int d = p.dim;
  const double mu = p.mu, statvar = p.stationary_var();
  const double lam = bd.lam, mud = bd.mud, delta = bd.delta;
  const double inv_lam = 1.0 / lam, inv_delta = 1.0 / delta;
  double root_surv = bd.survival(T);

  ReducedSample out;
  out.sums.assign(fs.size(), 0.0);
  out.sum_x.assign(d, 0.0);

  std::vector<Node> stack;
  stack.reserve(256);

  auto advance = [&](double* x, double dt) {
    double m = std::exp(-mu * dt);
    double sd = std::sqrt(statvar * (1.0 - m * m));
    for (int j = 0; j < d; ++j) x[j] = x[j] * m + sd * rng.normal();
  };

  for (const auto& atom : nu.atoms()) {
    long long cnt = (long long)std::floor((double)n * atom.mass);
    for (long long c = 0; c < cnt; ++c) {
      if (!rng.bernoulli(root_surv)) continue;  // no descendants at T
      Node root;
      for (int j = 0; j < d; ++j) root.x[j] = atom.x[j];
      root.u = T;
      stack.push_back(root);
      while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        // next visible branch: integrated hazard lam*S inverts in closed form
        double A = lam * std::exp(delta * nd.u) - mud;
        double q = (A * std::exp(-rng.exponential()) + mud) * inv_lam;
        double u_child = std::log(q) * inv_delta;
        if (u_child <= 0.0) {
          // lineage reaches the horizon: one alive particle
          advance(nd.x, nd.u);
          ++out.count;
          for (size_t i = 0; i < fs.size(); ++i) out.sums[i] += fs[i].eval(nd.x);
          for (int j = 0; j < d; ++j) out.sum_x[j] += nd.x[j];
          if (out.count > leaf_cap) {
            out.aborted = true;
            return out;
          }
        } else {
          advance(nd.x, nd.u - u_child);
          nd.u = u_child;
          stack.push_back(nd);
          stack.push_back(nd);
        }
      }
    }
  }
  return out;
}

}  // namespace ousp
