#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ousp/acceptance.hpp"
#include "ousp/backbone.hpp"
#include "ousp/experiment.hpp"
#include "ousp/moments.hpp"
#include "ousp/particle.hpp"
#include "ousp/phi.hpp"
#include "ousp/rng.hpp"
#include "ousp/semigroup.hpp"
#include "ousp/variances.hpp"

using namespace ousp;

namespace {

struct ModelOpts {
  double sigma = 1.0, mu = 1.0, alpha = 1.0, beta = 0.5;
  int dim = 1;
  void attach(CLI::App* app) {
    app->add_option("--sigma", sigma, "diffusion scale")->check(CLI::PositiveNumber);
    app->add_option("--mu", mu, "mean-reversion rate")->check(CLI::PositiveNumber);
    app->add_option("--alpha", alpha, "net growth rate")->check(CLI::PositiveNumber);
    app->add_option("--beta", beta, "quadratic branching coefficient")->check(CLI::PositiveNumber);
    app->add_option("--dim", dim, "spatial dimension (1..3)")->check(CLI::Range(1, 3));
  }
  ModelParams params() const { return ModelParams(sigma, mu, alpha, beta, dim); }
};

uint64_t env_u64(const char* name, uint64_t fallback) {
  const char* v = std::getenv(name);
  return v ? std::strtoull(v, nullptr, 10) : fallback;
}

void print_report(const ExperimentReport& rep, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_report(rep, out_dir);
  for (const auto& v : rep.verdicts)
    std::printf("%-28s %s  %s\n", v.name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
  std::printf("report: %s/report.json, %s/rows.csv\n", out_dir.c_str(), out_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification lab for a branching Ornstein-Uhlenbeck population model"};
  app.require_subcommand(1);

  uint64_t seed = env_u64("OUSP_SEED", 20260826ULL);
  int workers = (int)env_u64("OUSP_WORKERS", 1);
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  // simulate: one particle-system trajectory, snapshot to CSV
  auto* sim = app.add_subcommand("simulate", "run one finite-population trajectory and dump a snapshot");
  ModelOpts sim_m;
  sim_m.attach(sim);
  double sim_t = 1.0;
  long long sim_n = 100;
  std::string sim_nu = "1 @ 0", sim_mech = "super", sim_out = "snapshot";
  bool sim_backbone = false;
  sim->add_option("--t", sim_t, "time horizon")->check(CLI::NonNegativeNumber);
  sim->add_option("--n", sim_n, "mass scale (particles per unit mass)")->check(CLI::PositiveNumber);
  sim->add_option("--nu", sim_nu, "initial measure, e.g. '1 @ 0; 0.5 @ 1'");
  sim->add_option("--mechanism", sim_mech, "super or sub")->check(CLI::IsMember({"super", "sub"}));
  sim->add_flag("--skeleton", sim_backbone, "simulate the immortal skeleton instead");
  sim->add_option("--out", sim_out, "output prefix");

  // moments: k-th moment functions at a point
  auto* mom = app.add_subcommand("moments", "evaluate moment functions u_k and skeleton moments V_k");
  ModelOpts mom_m;
  mom_m.attach(mom);
  int mom_k = 2;
  double mom_t = 1.0;
  std::string mom_f = "x1", mom_x = "0";
  mom->add_option("-k,--order", mom_k, "moment order (1..8)")->check(CLI::Range(1, 8));
  mom->add_option("--t", mom_t, "time")->check(CLI::NonNegativeNumber);
  mom->add_option("--f", mom_f, "polynomial test function");
  mom->add_option("--x", mom_x, "evaluation point, comma separated");

  // variance: limit variance for the current regime
  auto* var = app.add_subcommand("variance", "compute the limit fluctuation variance for f");
  ModelOpts var_m;
  var_m.attach(var);
  std::string var_f = "x1";
  bool var_quad = false;
  var->add_option("--f", var_f, "polynomial test function");
  var->add_flag("--quadrature", var_quad, "force the quadrature path at the critical point");

  // clt / mass-law / backbone: replicated experiments from a config file
  std::string cfg_path;
  auto* clt = app.add_subcommand("clt", "replicated fluctuation experiment for the current regime");
  clt->add_option("--config", cfg_path, "key = value config file")->required();
  auto* mass = app.add_subcommand("mass-law", "total-mass law checks: Laplace transform, extinction, limit law");
  mass->add_option("--config", cfg_path, "key = value config file")->required();
  auto* bb = app.add_subcommand("backbone", "skeleton martingale and limit-law checks");
  bb->add_option("--config", cfg_path, "key = value config file")->required();

  // validate: acceptance sweep
  auto* val = app.add_subcommand("validate", "run the acceptance criteria end to end");
  bool val_quick = false;
  std::string val_out = "validate_out";
  val->add_flag("--quick", val_quick, "reduced replica counts and feasible fast-regime scale");
  val->add_option("--out", val_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      ModelParams p = sim_m.params();
      ExperimentConfig tmp;
      tmp.dim = p.dim;
      tmp.nu_text = sim_nu;
      AtomicMeasure nu = tmp.nu();
      RngStream rng(seed, 0);
      if (sim_backbone) {
        AtomicMeasure gamma(p.dim);
        for (const auto& atom : nu.atoms()) {
          long long k = rng.poisson(p.lambda_star() * atom.mass);
          for (long long i = 0; i < k; ++i) gamma.add_atom(atom.x, 1.0);
        }
        BackboneState st = simulate_backbone(gamma, sim_t, p, rng, true);
        dump_event_log(st, sim_out + "_events.csv");
        std::printf("skeleton particles at t = %g: %zu\n", sim_t, st.particles.size());
      } else {
        Mechanism mech = sim_mech == "super" ? Mechanism::Super : Mechanism::Sub;
        ParticleSystem st = simulate_superprocess(nu, sim_t, sim_n, mech, p, rng);
        dump_snapshot(st, sim_out + ".csv", sim_out + ".json", seed, 0);
        std::printf("particles at t = %g: %lld (mass %.6g)%s\n", st.current_time, st.count(),
                    st.total_mass(), st.aborted ? " [aborted at population cap]" : "");
      }
      return 0;
    }

    if (mom->parsed()) {
      ModelParams p = mom_m.params();
      Polynomial f = Polynomial::parse(mom_f, p.dim);
      std::vector<double> x;
      {
        std::stringstream ss(mom_x);
        std::string item;
        while (std::getline(ss, item, ',')) x.push_back(std::stod(item));
      }
      if ((int)x.size() != p.dim) throw std::invalid_argument("--x has wrong dimension");
      MomentEngine eng(p);
      nlohmann::json out;
      MomentResult u = eng.u_moment(f, x, mom_t, mom_k, Mechanism::Super);
      MomentResult us = eng.u_moment(f, x, mom_t, mom_k, Mechanism::Sub);
      MomentResult v = eng.backbone_moment(f, x, mom_t, mom_k);
      out["u_super"] = {{"value", u.value}, {"abs_error_estimate", u.abs_error_estimate}};
      out["u_sub"] = {{"value", us.value}, {"abs_error_estimate", us.abs_error_estimate}};
      out["v_skeleton"] = {{"value", v.value}, {"abs_error_estimate", v.abs_error_estimate}};
      std::printf("%s\n", out.dump(2).c_str());
      return 0;
    }

    if (var->parsed()) {
      ModelParams p = var_m.params();
      Polynomial f = Polynomial::parse(var_f, p.dim);
      VarianceResult r;
      if (p.regime() == Regime::Slow) r = sigma_slow(f, p);
      else if (p.regime() == Regime::Critical) r = sigma_critical(f, p, var_quad);
      else {
        std::vector<double> zero(p.dim, 0.0), one(p.dim, 1.0);
        FastBoundReport rep =
            fast_regime_bound_check(f, p, {zero, one}, {0.5, 1, 2, 3, 4, 5, 6});
        std::printf("fast regime: no single limit variance; second-moment bound sup = %.10g, "
                    "stabilized after burn-in: %s\n",
                    rep.max_value, rep.stabilized_after_burnin ? "yes" : "no");
        return rep.stabilized_after_burnin ? 0 : 1;
      }
      std::printf("regime %s: sigma_f^2 = %.12g (tail bound %.3g, %s)\n", regime_name(r.regime),
                  r.sigma_sq, r.tail_bound, r.method.c_str());
      return 0;
    }

    if (clt->parsed() || mass->parsed() || bb->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_file(cfg_path);
      if (!app.get_option("--seed")->empty() || std::getenv("OUSP_SEED")) cfg.seed = seed;
      if (!app.get_option("--workers")->empty() || std::getenv("OUSP_WORKERS")) cfg.workers = workers;
      ExperimentReport rep = clt->parsed()   ? run_regime_experiment(cfg)
                             : mass->parsed() ? run_mass_law_suite(cfg)
                                              : run_backbone_suite(cfg);
      print_report(rep, cfg.out_dir);
      return rep.all_pass() ? 0 : 1;
    }

    if (val->parsed()) {
      std::filesystem::create_directories(val_out);
      auto results = run_acceptance(val_quick, workers, seed, val_out);
      bool ok = true;
      for (const auto& r : results) {
        std::printf("criterion %2d %-34s %s  (%.1fs)  %s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
