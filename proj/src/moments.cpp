#include "ousp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ousp/quadrature.hpp"

namespace ousp {

std::vector<PartitionTerm> faa_di_bruno_terms(int k) {
  if (k < 1 || k > 8) throw std::invalid_argument("faa_di_bruno_terms: k must be in 1..8");
  long long fact[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
  std::vector<PartitionTerm> out;
  std::vector<int> m(k, 0);
  // enumerate all m with sum j*m_j = k
  auto rec = [&](auto&& self, int j, int remaining) -> void {
    if (j == k) {
      if (remaining != 0) return;
      long long denom = 1;
      for (int i = 0; i < k; ++i) denom *= fact[m[i]] * (long long)std::llround(std::pow((double)fact[i + 1], m[i]));
      out.push_back({m, fact[k] / denom});
      return;
    }
    for (int c = remaining / (j + 1); c >= 0; --c) {
      m[j] = c;
      self(self, j + 1, remaining - c * (j + 1));
    }
    m[j] = 0;
  };
  rec(rec, 0, k);
  std::sort(out.begin(), out.end(),
            [](const PartitionTerm& a, const PartitionTerm& b) { return a.m > b.m; });
  return out;
}

MomentEngine::MomentEngine(const ModelParams& p, double abs_tol, double rel_tol)
    : p_(p), sg_(p), abs_tol_(abs_tol), rel_tol_(rel_tol) {}

namespace {
int tag_of(Mechanism m) { return m == Mechanism::Super ? 0 : 1; }
}  // namespace

struct MomentEngine::Ctx {
  const Polynomial* f;
  // key: (tag, k, t); tag 0 = Super, 1 = Sub, 2 = backbone
  std::map<std::tuple<int, int, double>, std::pair<Polynomial, double>> cache;
};

std::pair<Polynomial, double> MomentEngine::u_rec(Ctx& ctx, double t, int k, Mechanism mech) const {
  double sa = (mech == Mechanism::Super ? 1.0 : -1.0) * p_.alpha;
  if (k == 1) return {sg_.apply(*ctx.f, t, sa), 0.0};
  auto key = std::make_tuple(tag_of(mech), k, t);
  if (auto it = ctx.cache.find(key); it != ctx.cache.end()) return it->second;

  // partitions with m_1+...+m_k = 2 (the only ones a quadratic mechanism keeps)
  std::vector<PartitionTerm> pairs;
  for (const auto& pt : faa_di_bruno_terms(k)) {
    int tot = 0;
    for (int v : pt.m) tot += v;
    if (tot == 2) pairs.push_back(pt);
  }

  PolyIntegrand fn = [&](double s) -> std::pair<Polynomial, double> {
    Polynomial bracket(p_.dim);
    double err = 0.0;
    for (const auto& pt : pairs) {
      // product of exactly two factors: u_a * u_b (possibly a == b)
      int a = 0, b = 0;
      for (int j = 0; j < k; ++j)
        for (int c = 0; c < pt.m[j]; ++c) (a == 0 ? a : b) = j + 1;
      auto [ua, ea] = u_rec(ctx, s, a, mech);
      auto [ub, eb] = u_rec(ctx, s, b, mech);
      double c = 2.0 * p_.beta * (double)pt.coeff;
      bracket += (ua * ub) * c;
      err += std::fabs(c) * (ea * ub.coeff_norm() + eb * ua.coeff_norm());
    }
    Polynomial moved = sg_.apply(bracket, t - s, sa) * -1.0;
    return {moved, err * std::exp(std::max(sa, 0.0) * (t - s))};
  };

  PolyQuad q = integrate_poly(fn, 0.0, t, p_.dim, abs_tol_, rel_tol_, 20, initial_panels_);
  if (!q.converged) throw std::runtime_error("u_moment: time quadrature did not converge");
  auto res = std::make_pair(q.value, q.abs_error);
  ctx.cache.emplace(key, res);
  return res;
}

std::pair<Polynomial, double> MomentEngine::v_rec(Ctx& ctx, double t, int k) const {
  double a = p_.alpha, b = p_.beta;
  if (k == 1) return {sg_.apply(*ctx.f, t, 0.0) * (-2.0 * (b / a) * std::sinh(a * t)), 0.0};
  auto key = std::make_tuple(2, k, t);
  if (auto it = ctx.cache.find(key); it != ctx.cache.end()) return it->second;

  std::vector<PartitionTerm> pairs;
  for (const auto& pt : faa_di_bruno_terms(k)) {
    int tot = 0;
    for (int v : pt.m) tot += v;
    if (tot == 2) pairs.push_back(pt);
  }

  // W_j := -(alpha/beta) V_j + u*_j; W_1 collapses to the weighted semigroup
  // image of f, which is used analytically.
  auto W = [&](double s, int j) -> std::pair<Polynomial, double> {
    if (j == 1) return {sg_.apply(*ctx.f, s, a), 0.0};
    auto [vj, ev] = v_rec(ctx, s, j);
    auto [uj, eu] = u_rec(ctx, s, j, Mechanism::Sub);
    return {uj - vj * (a / b), eu + ev * (a / b)};
  };

  PolyIntegrand fn = [&](double s) -> std::pair<Polynomial, double> {
    Polynomial bracket(p_.dim);
    double err = 0.0;
    for (const auto& pt : pairs) {
      int i1 = 0, i2 = 0;
      for (int j = 0; j < k; ++j)
        for (int c = 0; c < pt.m[j]; ++c) (i1 == 0 ? i1 : i2) = j + 1;
      auto [wa, ewa] = W(s, i1);
      auto [wb, ewb] = W(s, i2);
      auto [ua, eua] = u_rec(ctx, s, i1, Mechanism::Sub);
      auto [ub, eub] = u_rec(ctx, s, i2, Mechanism::Sub);
      double c = 2.0 * b * (double)pt.coeff;
      bracket += (wa * wb - ua * ub) * c;
      err += std::fabs(c) * (ewa * wb.coeff_norm() + ewb * wa.coeff_norm() +
                             eua * ub.coeff_norm() + eub * ua.coeff_norm());
    }
    auto [uk, euk] = u_rec(ctx, s, k, Mechanism::Sub);
    bracket += uk * (-2.0 * a);
    err += 2.0 * a * euk;
    Polynomial moved = sg_.apply(bracket, t - s, a) * (b / a);
    return {moved, (b / a) * err * std::exp(a * (t - s))};
  };

  PolyQuad q = integrate_poly(fn, 0.0, t, p_.dim, abs_tol_, rel_tol_, 20, initial_panels_);
  if (!q.converged) throw std::runtime_error("backbone_moment: time quadrature did not converge");
  auto res = std::make_pair(q.value, q.abs_error);
  ctx.cache.emplace(key, res);
  return res;
}

std::pair<Polynomial, double> MomentEngine::u_poly(const Polynomial& f, double t, int k,
                                                   Mechanism mech) const {
  if (k < 1 || k > 4) throw std::invalid_argument("u_moment: k must be in 1..4");
  if (t < 0.0) throw std::invalid_argument("u_moment: t must be >= 0");
  Ctx ctx{&f, {}};
  return u_rec(ctx, t, k, mech);
}

std::pair<Polynomial, double> MomentEngine::v_poly(const Polynomial& f, double t, int k) const {
  if (k < 1 || k > 4) throw std::invalid_argument("backbone_moment: k must be in 1..4");
  if (t < 0.0) throw std::invalid_argument("backbone_moment: t must be >= 0");
  Ctx ctx{&f, {}};
  return v_rec(ctx, t, k);
}

MomentResult MomentEngine::u_moment(const Polynomial& f, const std::vector<double>& x, double t,
                                    int k, Mechanism mech) const {
  if ((int)x.size() != p_.dim)
    throw std::invalid_argument("u_moment: evaluation point has wrong dimension");
  auto [p, e] = u_poly(f, t, k, mech);
  return {p.eval(x), e, k, mech == Mechanism::Super ? MomentKind::USuper : MomentKind::USub};
}

MomentResult MomentEngine::backbone_moment(const Polynomial& f, const std::vector<double>& x,
                                           double t, int k) const {
  if ((int)x.size() != p_.dim)
    throw std::invalid_argument("backbone_moment: evaluation point has wrong dimension");
  auto [p, e] = v_poly(f, t, k);
  return {p.eval(x), e, k, MomentKind::VBackbone};
}

double total_mass_laplace(double theta, double t, const ModelParams& p) {
  if (theta < 0.0 || t < 0.0) throw std::invalid_argument("total_mass_laplace: bad arguments");
  if (theta == 0.0) return 0.0;
  // v = alpha theta / ((alpha - beta theta) e^{-alpha t} + beta theta)
  return p.alpha * theta / ((p.alpha - p.beta * theta) * std::exp(-p.alpha * t) + p.beta * theta);
}

double extinction_probability(double total_mass, const ModelParams& p) {
  if (total_mass < 0.0) throw std::invalid_argument("extinction_probability: negative mass");
  return std::exp(-total_mass * p.alpha / p.beta);
}

double sample_v_infinity(double total_mass, const ModelParams& p, RngStream& rng) {
  double rate = p.alpha / p.beta;
  long long n = rng.poisson(total_mass * rate);
  double acc = 0.0;
  for (long long i = 0; i < n; ++i) acc += rng.exponential(rate);
  return acc;
}

double dressing_mean(const Polynomial& f, const AtomicMeasure& nu, double s, double t,
                     const SemigroupAction& sg) {
  if (s < 0.0 || t < 0.0) throw std::invalid_argument("dressing_mean: bad times");
  Polynomial moved = sg.apply(f, t + s, 0.0);
  double acc = 0.0;
  for (const auto& atom : nu.atoms()) acc += atom.mass * moved.eval(atom.x);
  return std::exp(sg.params().alpha * (s - t)) * acc;
}

}  // namespace ousp
