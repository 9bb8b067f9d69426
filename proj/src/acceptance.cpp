#include "ousp/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ousp/experiment.hpp"
#include "ousp/moments.hpp"
#include "ousp/particle.hpp"
#include "ousp/rng.hpp"
#include "ousp/stats.hpp"
#include "ousp/variances.hpp"

namespace ousp {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void pool_for(long long nitems, int workers, const std::function<void(long long)>& fn) {
  if (workers <= 1) {
    for (long long i = 0; i < nitems; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        long long i = next.fetch_add(1);
        if (i >= nitems) return;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

const Verdict* find_verdict(const ExperimentReport& rep, const std::string& name) {
  for (const auto& v : rep.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    auto t1 = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

}  // namespace

std::vector<CriterionResult> run_acceptance(bool quick, int workers, uint64_t seed,
                                            const std::string& out_dir) {
  std::vector<CriterionResult> out;
  Timer timer;
  auto push = [&](int id, const std::string& name, bool pass, const std::string& detail) {
    out.push_back({id, name, pass, detail, timer.lap()});
  };
  auto subdir = [&](const std::string& name) {
    std::string d = out_dir + "/" + name;
    std::filesystem::create_directories(d);
    return d;
  };

  // --- criteria 1 + 2: total-mass Laplace oracle and extinction fraction ----
  ExperimentConfig mass_cfg;
  mass_cfg.sigma = 1;
  mass_cfg.mu = 1;
  mass_cfg.alpha = 1;
  mass_cfg.beta = 1;
  mass_cfg.dim = 1;
  mass_cfg.nu_text = "1 @ 0";
  mass_cfg.n = 200;
  mass_cfg.replicas = quick ? 1500 : 5000;
  mass_cfg.laplace_t = 1;
  mass_cfg.ks_t = 10;
  mass_cfg.horizon = 15;
  mass_cfg.theta_grid = {0.5, 1.0, 2.0};
  mass_cfg.v_draws = quick ? 4000 : 10000;
  mass_cfg.seed = seed;
  mass_cfg.workers = workers;
  ExperimentReport mass_rep = run_mass_law_suite(mass_cfg);
  write_report(mass_rep, subdir("c01_mass_law"));
  {
    bool pass = true;
    std::string detail;
    for (double theta : mass_cfg.theta_grid) {
      const Verdict* v = find_verdict(mass_rep, "laplace_theta_" + [&] {
        char b[40];
        std::snprintf(b, sizeof(b), "%.17g", theta);
        return std::string(b);
      }());
      pass = pass && v && v->pass;
      if (v) detail += (detail.empty() ? "" : "; ") + v->detail;
    }
    push(1, "laplace_transform_oracle", pass, detail);
    const Verdict* e = find_verdict(mass_rep, "extinction_fraction");
    push(2, "extinction_probability", e && e->pass, e ? e->detail : "verdict missing");
  }

  // --- criterion 3: moment identity u_k = u*_k - (alpha/beta) V_k ----------
  {
    ModelParams p(1, 1, 1, 0.5, 1);
    MomentEngine eng(p);
    bool pass = true;
    double worst = 0.0, worst_budget = 0.0;
    std::string fail_at;
    for (const std::string& ftext : {std::string("x1"), std::string("x1^2 - 0.5")}) {
      Polynomial f = Polynomial::parse(ftext, 1);
      for (double x : {0.0, 1.0})
        for (double t : {0.5, 1.0, 2.0})
          for (int k = 1; k <= 4; ++k) {
            MomentResult u = eng.u_moment(f, {x}, t, k, Mechanism::Super);
            MomentResult us = eng.u_moment(f, {x}, t, k, Mechanism::Sub);
            MomentResult v = eng.backbone_moment(f, {x}, t, k);
            double lhs = u.value;
            double rhs = us.value - (p.alpha / p.beta) * v.value;
            double diff = std::fabs(lhs - rhs);
            double budget = k == 1 ? 1e-12
                                   : u.abs_error_estimate + us.abs_error_estimate +
                                         (p.alpha / p.beta) * v.abs_error_estimate;
            bool ok = diff <= budget && (k == 1 || budget <= 1e-6);
            if (diff > worst) {
              worst = diff;
              worst_budget = budget;
            }
            if (!ok && pass) {
              pass = false;
              fail_at = "f = " + ftext + ", k = " + std::to_string(k) + ", x = " + fmt(x) +
                        ", t = " + fmt(t) + ": |diff| = " + fmt(diff) + ", budget " + fmt(budget);
            }
          }
    }
    push(3, "moment_identity", pass,
         pass ? "worst |diff| = " + fmt(worst) + " within budget " + fmt(worst_budget) : fail_at);
  }

  // --- criterion 4: empirical variance of <x, X_1> vs -u2(0,1) -------------
  {
    ModelParams p(1, 1, 1, 1, 1);
    MomentEngine eng(p);
    Polynomial f = Polynomial::variable(0, 1);
    double target = -eng.u_moment(f, {0.0}, 1.0, 2, Mechanism::Super).value;
    long long R = quick ? 2000 : 10000;
    long long n = 200;
    AtomicMeasure nu = AtomicMeasure::delta(std::vector<double>{0.0});
    std::vector<double> vals(R);
    pool_for(R, workers, [&](long long i) {
      RngStream rng(seed, (uint64_t)i);
      ParticleSystem st = simulate_superprocess(nu, 1.0, n, Mechanism::Super, p, rng);
      double s = 0.0;
      for (long long j = 0; j < st.count(); ++j) s += st.pos[j];
      vals[i] = s / (double)n;
    });
    // 4 standard errors of the sample variance: se^2 = (m4 - m2^2) / R
    double m = mean(vals);
    double m2 = 0.0, m4 = 0.0;
    for (double v : vals) {
      double d = v - m;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    m2 /= (double)R;
    m4 /= (double)R;
    double s2 = m2 * (double)R / (double)(R - 1);
    double se = std::sqrt((m4 - m2 * m2) / (double)R);
    push(4, "variance_bridge", std::fabs(s2 - target) <= 4.0 * se,
         "sample var " + fmt(s2) + " vs -u2(0,1) = " + fmt(target) + " (4se = " + fmt(4 * se) + ")");
  }

  // --- criterion 5: critical limit variance, closed form vs quadrature -----
  {
    ModelParams p(1, 1, 2, 1, 1);
    bool pass = true;
    std::string detail;
    for (const std::string& ftext : {std::string("x1"), std::string("x1^3")}) {
      Polynomial f = Polynomial::parse(ftext, 1);
      double a = sigma_critical(f, p, false).sigma_sq;
      double b = sigma_critical(f, p, true).sigma_sq;
      double rel = std::fabs(a - b) / std::fabs(a);
      pass = pass && rel < 1e-8;
      detail += (detail.empty() ? "" : "; ") + ftext + ": closed " + fmt(a) + ", quad " + fmt(b) +
                ", rel " + fmt(rel);
    }
    push(5, "critical_variance_quadrature", pass, detail);
  }

  // --- criterion 6: finite-t skeleton second moments approach the limits ---
  {
    bool pass = true;
    std::string detail;
    for (int which = 0; which < 2; ++which) {
      ModelParams p = which == 0 ? ModelParams(1, 1, 1, 0.5, 1) : ModelParams(1, 1, 2, 1, 1);
      double tol = which == 0 ? 0.02 : 0.05;
      Polynomial f = Polynomial::variable(0, 1);
      Polynomial ft = center(f, p);
      double target = which == 0 ? sigma_slow(f, p).sigma_sq : sigma_critical(f, p).sigma_sq;
      MomentEngine eng(p);
      double prev_gap = -1.0;
      bool ok = true;
      std::string vals;
      for (double t : {6.0, 9.0, 12.0}) {
        double v2 = eng.backbone_moment(ft, {0.0}, t, 2).value;
        // (alpha/beta) converts the per-skeleton-particle second moment to the
        // normalization by total mass used by the fluctuation statistics
        double r = (p.alpha / p.beta) * std::exp(-p.alpha * t) * v2 / (which == 0 ? 1.0 : t);
        // the critical ratio carries an exact finite-time deficit of
        // 1 - (1 - e^{-2 mu t}) / (2 mu t); divide it out so the comparison
        // tests convergence of what remains
        if (which == 1) r /= 1.0 - (1.0 - std::exp(-2.0 * p.mu * t)) / (2.0 * p.mu * t);
        double gap = std::fabs(r - target);
        ok = ok && gap <= tol * std::fabs(target) && (prev_gap < 0.0 || gap <= prev_gap + 1e-13);
        prev_gap = gap;
        vals += " " + fmt(r);
      }
      pass = pass && ok;
      detail += std::string(which == 0 ? "slow:" : "; critical:") + vals + " -> " + fmt(target);
    }
    push(6, "skeleton_moment_asymptote", pass, detail);
  }

  // --- criterion 7: slow-regime fluctuation law -----------------------------
  ExperimentConfig slow_cfg;
  slow_cfg.sigma = 1;
  slow_cfg.mu = 1;
  slow_cfg.alpha = 1;
  slow_cfg.beta = 0.5;
  slow_cfg.dim = 1;
  slow_cfg.f_text = "x1";
  slow_cfg.nu_text = "1 @ 0";
  slow_cfg.horizon = 16;  // fluctuation checkpoint at t = 8
  slow_cfg.n = 200;
  slow_cfg.replicas = quick ? 1200 : 5000;
  slow_cfg.seed = seed;
  slow_cfg.workers = workers;
  slow_cfg.v_draws = 100;
  ExperimentReport slow_rep = run_regime_experiment(slow_cfg);
  write_report(slow_rep, subdir("c07_slow_clt"));
  {
    const Verdict* a = find_verdict(slow_rep, "variance_match");
    const Verdict* b = find_verdict(slow_rep, "ks_gaussian");
    bool pass = a && a->pass && b && b->pass;
    push(7, "slow_regime_clt", pass,
         (a ? a->detail : "missing") + "; " + (b ? b->detail : "missing"));
  }

  // --- criterion 8: critical-regime fluctuation law -------------------------
  ExperimentConfig crit_cfg;
  crit_cfg.sigma = 1;
  crit_cfg.mu = 1;
  crit_cfg.alpha = 2;
  crit_cfg.beta = 1;
  crit_cfg.dim = 1;
  crit_cfg.f_text = "x1";
  crit_cfg.nu_text = "1 @ 0";
  crit_cfg.horizon = 10;  // fluctuation checkpoint at t = 5
  crit_cfg.n = 50;
  crit_cfg.replicas = quick ? 400 : 1000;
  crit_cfg.seed = seed;
  crit_cfg.workers = workers;
  crit_cfg.v_draws = 100;
  ExperimentReport crit_rep = run_regime_experiment(crit_cfg);
  write_report(crit_rep, subdir("c08_critical_clt"));
  {
    const Verdict* a = find_verdict(crit_rep, "variance_match");
    const Verdict* b = find_verdict(crit_rep, "ks_gaussian");
    bool pass = a && a->pass && b && b->pass;
    push(8, "critical_regime_clt", pass,
         (a ? a->detail : "missing") + "; " + (b ? b->detail : "missing"));
  }

  // --- criterion 9: fast-regime residual decay ------------------------------
  {
    ExperimentConfig fast_cfg;
    fast_cfg.sigma = 1;
    fast_cfg.mu = 1;
    fast_cfg.alpha = 3;
    fast_cfg.beta = 1;
    fast_cfg.dim = 1;
    fast_cfg.f_text = "x1 + x1^2";
    fast_cfg.nu_text = "1 @ 0";
    fast_cfg.n = 200;
    fast_cfg.seed = seed;
    fast_cfg.workers = workers;
    // Full scale needs checkpoints at t = 4 and t = 8 with about n * e^{24}
    // particles alive at the end; that exceeds any single-machine budget, so
    // full mode runs a small replica count and reports the abort honestly.
    // Quick mode checks the same decay property at a feasible scale. The
    // residual decays at rate min(mu, (alpha - 2 mu) / 2) per unit time, so
    // quick mode raises alpha to 4 to make a one-unit checkpoint gap enough
    // for halving (expected ratio e^{-1}).
    if (quick) {
      fast_cfg.alpha = 4;
      fast_cfg.n = 50;
      fast_cfg.horizon = 2;
      fast_cfg.replicas = 300;
    } else {
      // every replica aborts at the population cap long before t = 4, so a
      // small replica count documents the blocker without burning an hour
      fast_cfg.horizon = 8;
      fast_cfg.replicas = 20;
    }
    ExperimentReport fast_rep = run_regime_experiment(fast_cfg);
    write_report(fast_rep, subdir("c09_fast_residual"));
    const Verdict* v = find_verdict(fast_rep, "fast_residual_halving");
    std::string note = quick ? " [reduced scale: alpha 4, checkpoints 1 and 2]" : "";
    push(9, "fast_regime_residual", v && v->pass, (v ? v->detail : "missing") + note);
  }

  // --- criterion 10: skeleton mass martingale vs compound-Poisson law -------
  {
    ExperimentConfig bb_cfg;
    bb_cfg.sigma = 1;
    bb_cfg.mu = 1;
    bb_cfg.alpha = 1;
    bb_cfg.beta = 1;
    bb_cfg.dim = 1;
    bb_cfg.nu_text = "1 @ 0";
    bb_cfg.ks_t = 10;
    bb_cfg.replicas = quick ? 1000 : 3000;
    bb_cfg.v_draws = 10000;
    bb_cfg.seed = seed;
    bb_cfg.workers = workers;
    ExperimentReport bb_rep = run_backbone_suite(bb_cfg);
    write_report(bb_rep, subdir("c10_backbone"));
    const Verdict* v = find_verdict(bb_rep, "backbone_ks");
    push(10, "skeleton_limit_law", v && v->pass, v ? v->detail : "missing");
  }

  // --- criterion 11: independence of the limit components -------------------
  {
    const Verdict* a = find_verdict(slow_rep, "independence");
    const Verdict* b = find_verdict(crit_rep, "independence");
    bool pass = a && a->pass && b && b->pass;
    push(11, "component_independence", pass,
         "slow: " + (a ? a->detail : "missing") + "; critical: " + (b ? b->detail : "missing"));
  }

  // --- criterion 12: bit-identical rows across worker counts ----------------
  {
    ExperimentConfig det_cfg = mass_cfg;
    det_cfg.replicas = 500;
    det_cfg.laplace_t = 1;
    det_cfg.ks_t = 2;
    det_cfg.horizon = 3;
    det_cfg.n = 100;
    det_cfg.v_draws = 500;
    ExperimentConfig det_slow = slow_cfg;
    det_slow.replicas = 300;
    det_slow.horizon = 4;
    det_slow.n = 100;
    bool pass = true;
    std::string detail;
    int tag = 0;
    for (const auto* base : {&det_cfg, &det_slow}) {
      std::string ref;
      for (int w : {1, 4, 8}) {
        ExperimentConfig c = *base;
        c.workers = w;
        ExperimentReport r =
            tag == 0 ? run_mass_law_suite(c) : run_regime_experiment(c);
        std::string d = subdir("c12_w" + std::to_string(w) + (tag == 0 ? "_mass" : "_slow"));
        write_report(r, d);
        std::string bytes = read_bytes(d + "/rows.csv");
        if (ref.empty()) ref = bytes;
        else if (bytes != ref) {
          pass = false;
          detail += "rows differ at workers = " + std::to_string(w) +
                    (tag == 0 ? " (mass)" : " (slow)") + "; ";
        }
      }
      ++tag;
    }
    push(12, "worker_determinism", pass, pass ? "rows.csv identical at 1/4/8 workers" : detail);
  }

  return out;
}

}  // namespace ousp
