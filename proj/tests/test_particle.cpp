#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ousp/moments.hpp"
#include "ousp/particle.hpp"
#include "ousp/reduced.hpp"
#include "ousp/rng.hpp"
#include "ousp/stats.hpp"

using namespace ousp;

namespace {
const ModelParams kSlow(1, 1, 1, 0.5, 1);
AtomicMeasure delta0() { return AtomicMeasure::delta(std::vector<double>{0.0}); }
}  // namespace

TEST_CASE("time zero returns the floored initial configuration") {
  AtomicMeasure nu(1);
  nu.add_atom({0.3}, 1.0);
  nu.add_atom({-1.0}, 0.257);
  RngStream rng(1, 0);
  ParticleSystem st = simulate_superprocess(nu, 0.0, 100, Mechanism::Super, kSlow, rng);
  CHECK(st.count() == 125);  // 100 + floor(25.7)
  CHECK(st.total_mass() == doctest::Approx(1.25));
}

TEST_CASE("rate guard: need 2 beta n > alpha") {
  RngStream rng(1, 0);
  AtomicMeasure nu = delta0();
  ModelParams p(1, 1, 3, 1, 1);
  CHECK_THROWS_AS(simulate_superprocess(nu, 1.0, 1, Mechanism::Super, p, rng),
                  std::invalid_argument);
}

TEST_CASE("mean mass follows e^{+alpha t} and e^{-alpha t}") {
  AtomicMeasure nu = delta0();
  const int R = 800;
  for (Mechanism mech : {Mechanism::Super, Mechanism::Sub}) {
    double s = 0, s2 = 0;
    for (int i = 0; i < R; ++i) {
      RngStream rng(11, i);
      ParticleSystem st = simulate_superprocess(nu, 1.0, 100, mech, kSlow, rng);
      double m = st.total_mass();
      s += m;
      s2 += m * m;
    }
    double mean_m = s / R, se = std::sqrt((s2 / R - mean_m * mean_m) / R);
    double target = mech == Mechanism::Super ? std::exp(1.0) : std::exp(-1.0);
    CHECK(std::fabs(mean_m - target) <= 4 * se + 1e-12);
  }
}

TEST_CASE("empirical variance of <x, X_t> matches the exact second moment") {
  // alpha = mu: Var<x, X_t> = 2 beta (cosh t - 1), exact for the finite-n
  // scheme up to an O(1/n) motion term bounded by t e^t sigma^2 / n
  AtomicMeasure nu = delta0();
  const int R = 3000;
  const long long n = 100;
  double t = 1.0;
  std::vector<double> vals(R);
  for (int i = 0; i < R; ++i) {
    RngStream rng(12, i);
    ParticleSystem st = simulate_superprocess(nu, t, n, Mechanism::Super, kSlow, rng);
    double s = 0;
    for (long long j = 0; j < st.count(); ++j) s += st.pos[j];
    vals[i] = s / (double)n;
  }
  double m = mean(vals);
  double m2 = 0, m4 = 0;
  for (double v : vals) {
    m2 += (v - m) * (v - m);
    m4 += (v - m) * (v - m) * (v - m) * (v - m);
  }
  m2 /= R;
  m4 /= R;
  double se = std::sqrt((m4 - m2 * m2) / R);
  double target = 2 * kSlow.beta * (std::cosh(t) - 1.0);
  double n_slack = t * std::exp(t) / (double)n;
  CHECK(std::fabs(m2 - target) <= 4 * se + n_slack);
}

TEST_CASE("spatial functional h is the running first-moment martingale") {
  AtomicMeasure nu = AtomicMeasure::delta(std::vector<double>{1.0});
  const int R = 600;
  std::vector<double> h1(R), h2(R);
  for (int i = 0; i < R; ++i) {
    RngStream rng(13, i);
    int step = 0;
    simulate_with_checkpoints(nu, {0.5, 1.0}, 100, Mechanism::Super, kSlow, rng,
                              [&](const ParticleSystem& st) {
                                Polynomial x = Polynomial::variable(0, 1);
                                Functionals fu = evaluate_functionals(st, x, kSlow);
                                (step == 0 ? h1[i] : h2[i]) = fu.h_value[0];
                                ++step;
                              });
  }
  std::vector<double> diff(R);
  for (int i = 0; i < R; ++i) diff[i] = h2[i] - h1[i];
  double md = mean(diff), se = std::sqrt(variance(diff) / R);
  CHECK(std::fabs(md) <= 4 * se + 1e-12);
  // and the level is right: E h(t) = |nu| x0 (alpha = mu cancellation)
  CHECK(std::fabs(mean(h1) - 1.0) <= 4 * std::sqrt(variance(h1) / R));
}

TEST_CASE("population cap aborts cleanly") {
  RngStream rng(14, 0);
  ModelParams fast(1, 1, 3, 1, 1);
  ParticleSystem st = simulate_superprocess(delta0(), 6.0, 200, Mechanism::Super, fast, rng, 3000);
  CHECK(st.aborted);
  CHECK(st.abort_time < 6.0);
  CHECK(st.count() >= 3000);
}

TEST_CASE("mass chain fast-forward agrees with the event-driven simulator in law") {
  // distribution of particle counts at t = 1.5 from 20 starters
  const int R = 2500;
  BirthDeathChain bd = BirthDeathChain::for_scheme(kSlow, 20, Mechanism::Super);
  std::vector<double> brute(R), chain(R);
  AtomicMeasure nu = delta0();
  for (int i = 0; i < R; ++i) {
    RngStream r1(15, i), r2(16, i);
    ParticleSystem st = simulate_superprocess(nu, 1.5, 20, Mechanism::Super, kSlow, r1);
    brute[i] = (double)st.count();
    chain[i] = (double)bd.forward_population(20, 1.5, r2);
  }
  KsResult ks = ks_two_sample(brute, chain);
  CHECK(ks.statistic < ks_two_sample_critical(0.01, R, R));
}

TEST_CASE("reduced genealogy sampler agrees with the brute simulator in law") {
  // small scale so the brute side is cheap: joint check on mass and <x, X_t>
  ModelParams p(1, 1, 1, 1, 1);
  AtomicMeasure nu = AtomicMeasure::delta(std::vector<double>{0.5});
  const int R = 4000;
  const long long n = 5;
  const double T = 1.5;
  std::vector<CompiledPoly> fs{CompiledPoly(Polynomial::variable(0, 1))};
  std::vector<double> mass_a, mass_b, fx_a, fx_b;
  for (int i = 0; i < R; ++i) {
    RngStream r1(17, i), r2(18, i);
    ParticleSystem st = simulate_superprocess(nu, T, n, Mechanism::Super, p, r1);
    mass_a.push_back((double)st.count());
    double s = 0;
    for (long long j = 0; j < st.count(); ++j) s += st.pos[j];
    fx_a.push_back(s);
    ReducedSample rs = sample_population_at(nu, T, n, Mechanism::Super, p, fs, r2);
    mass_b.push_back((double)rs.count);
    fx_b.push_back(rs.sums[0]);
  }
  KsResult km = ks_two_sample(mass_a, mass_b);
  CHECK(km.statistic < ks_two_sample_critical(0.01, R, R));
  KsResult kf = ks_two_sample(fx_a, fx_b);
  CHECK(kf.statistic < ks_two_sample_critical(0.01, R, R));
  // survival probability side check
  double surv_a = 0, surv_b = 0;
  for (int i = 0; i < R; ++i) {
    surv_a += mass_a[i] > 0;
    surv_b += mass_b[i] > 0;
  }
  CHECK(std::fabs(surv_a - surv_b) / R < 4 * std::sqrt(0.25 / R) * std::sqrt(2.0));
}

TEST_CASE("extinction at long horizons matches exp(-m0 alpha/beta)") {
  ModelParams p(1, 1, 1, 1, 1);
  BirthDeathChain bd = BirthDeathChain::for_scheme(p, 50, Mechanism::Super);
  const int R = 4000;
  double extinct = 0;
  for (int i = 0; i < R; ++i) {
    RngStream rng(19, i);
    extinct += bd.forward_population(50, 15.0, rng) == 0;
  }
  double payload = extinct / R, target = extinction_probability(1.0, p);
  CHECK(std::fabs(payload - target) <= 3 * std::sqrt(target * (1 - target) / R) + 1e-3);
}

TEST_CASE("sub mechanism dies out") {
  RngStream rng(20, 0);
  ParticleSystem st = simulate_superprocess(delta0(), 25.0, 60, Mechanism::Sub, kSlow, rng);
  CHECK_FALSE(st.survived());
}
