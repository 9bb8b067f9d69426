#include "ousp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ousp/backbone.hpp"
#include "ousp/moments.hpp"
#include "ousp/particle.hpp"
#include "ousp/phi.hpp"
#include "ousp/reduced.hpp"
#include "ousp/rng.hpp"
#include "ousp/stats.hpp"
#include "ousp/variances.hpp"

namespace ousp {

namespace {

constexpr uint64_t kAuxStreamBase = 1ULL << 32;  // streams for non-replica draws

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void parallel_for(long long nitems, int workers, const std::function<void(long long)>& fn) {
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

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int col_index(const std::vector<std::string>& columns, const std::string& name) {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return (int)i;
  return -1;
}

std::vector<double> column_values(const std::vector<std::vector<double>>& rows, int c) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

}  // namespace

ModelParams ExperimentConfig::params() const { return ModelParams(sigma, mu, alpha, beta, dim); }

Polynomial ExperimentConfig::f() const { return Polynomial::parse(f_text, dim); }

AtomicMeasure ExperimentConfig::nu() const {
  AtomicMeasure m(dim);
  std::stringstream ss(nu_text);
  std::string atom;
  while (std::getline(ss, atom, ';')) {
    atom = trim(atom);
    if (atom.empty()) continue;
    size_t at = atom.find('@');
    if (at == std::string::npos) throw std::invalid_argument("nu: atoms must look like 'mass @ x1,..'");
    double mass = std::stod(trim(atom.substr(0, at)));
    std::vector<double> x = parse_double_list(atom.substr(at + 1));
    if ((int)x.size() != dim) throw std::invalid_argument("nu: wrong position dimension");
    m.add_atom(x, mass);
  }
  return m;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "sigma") sigma = std::stod(value);
  else if (key == "mu") mu = std::stod(value);
  else if (key == "alpha") alpha = std::stod(value);
  else if (key == "beta") beta = std::stod(value);
  else if (key == "dim") dim = std::stoi(value);
  else if (key == "f") f_text = value;
  else if (key == "nu") nu_text = value;
  else if (key == "horizon") horizon = std::stod(value);
  else if (key == "n") n = std::stoll(value);
  else if (key == "replicas") replicas = std::stoll(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "workers") workers = std::stoi(value);
  else if (key == "regime") regime_text = value;
  else if (key == "survival_proxy") survival_proxy = value;
  else if (key == "out_dir") out_dir = value;
  else if (key == "theta_grid") theta_grid = parse_double_list(value);
  else if (key == "laplace_t") laplace_t = std::stod(value);
  else if (key == "ks_t") ks_t = std::stod(value);
  else if (key == "v_draws") v_draws = std::stoll(value);
  else if (key == "pop_cap") pop_cap = std::stoll(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"sigma", sigma},       {"mu", mu},
          {"alpha", alpha},       {"beta", beta},
          {"dim", dim},           {"f", f_text},
          {"nu", nu_text},        {"horizon", horizon},
          {"n", n},               {"replicas", replicas},
          {"seed", seed},         {"workers", workers},
          {"regime", regime_text},{"survival_proxy", survival_proxy},
          {"theta_grid", theta_grid}, {"laplace_t", laplace_t},
          {"ks_t", ks_t},         {"v_draws", v_draws},
          {"pop_cap", pop_cap}};
}

uint64_t ExperimentConfig::config_hash() const {
  std::string s = to_json().dump();
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void ExperimentConfig::validate() const {
  if (replicas < 20) throw std::invalid_argument("config: replicas must be >= 20");
  if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (survival_proxy != "alive" && survival_proxy != "mass_median")
    throw std::invalid_argument("config: survival_proxy must be 'alive' or 'mass_median'");
  ModelParams p = params();
  if (!regime_text.empty() && regime_text != regime_name(p.regime()))
    throw std::invalid_argument(std::string("config: regime '") + regime_text +
                                "' does not match parameters (" + regime_name(p.regime()) + ")");
  (void)f();
  (void)nu();
}

bool ExperimentReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

nlohmann::json summarize_rows(const std::vector<std::string>& columns,
                              const std::vector<std::vector<double>>& rows,
                              const std::string& suite) {
  nlohmann::json out;
  out["rows"] = rows.size();
  nlohmann::json cols;
  for (size_t c = 0; c < columns.size(); ++c) {
    std::vector<double> v = column_values(rows, (int)c);
    nlohmann::json cj;
    cj["mean"] = v.empty() ? 0.0 : mean(v);
    cj["var"] = v.size() >= 2 ? variance(v) : 0.0;
    cj["min"] = v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
    cj["max"] = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    cols[columns[c]] = cj;
  }
  out["columns"] = cols;

  int c_surv = col_index(columns, "survived");
  if (suite == "regime" && c_surv >= 0) {
    int c_mass = col_index(columns, "mass");
    int c2 = col_index(columns, "c2");
    int c3 = col_index(columns, "c3");
    int cv = col_index(columns, "v_t");
    std::vector<double> m_s, c2_s, c3_s, v_s;
    for (const auto& r : rows) {
      if (r[c_surv] == 0.0) continue;
      m_s.push_back(r[c_mass]);
      if (c2 >= 0) c2_s.push_back(r[c2]);
      if (c3 >= 0) c3_s.push_back(r[c3]);
      v_s.push_back(r[cv]);
    }
    nlohmann::json cond;
    cond["survivors"] = m_s.size();
    if (c3 >= 0 && c3_s.size() >= 2) {
      cond["c3_mean"] = mean(c3_s);
      cond["c3_var"] = variance(c3_s);
      cond["corr_c1_c2"] = correlation(v_s, c2_s);
      cond["corr_c1_c3"] = correlation(v_s, c3_s);
      cond["corr_c2_c3"] = correlation(c2_s, c3_s);
    }
    // stricter conditioning: survivors whose checkpoint mass is at least half
    // the surviving median (sensitivity proxy)
    double med = median_of(m_s);
    std::vector<double> c3_strict;
    for (const auto& r : rows)
      if (r[c_surv] != 0.0 && r[c_mass] >= 0.5 * med && c3 >= 0) c3_strict.push_back(r[c3]);
    if (c3_strict.size() >= 2) {
      cond["c3_var_mass_median"] = variance(c3_strict);
      cond["survivors_mass_median"] = c3_strict.size();
    }
    out["conditional"] = cond;
  }
  return out;
}

// ---------------------------------------------------------------------------
// regime experiment

ExperimentReport run_regime_experiment(const ExperimentConfig& cfg) {
  auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  ModelParams p = cfg.params();
  Regime regime = p.regime();
  Polynomial f = cfg.f();
  Polynomial ft = center(f, p);
  double f_phi = phi_integral(f, p);
  std::vector<double> grad = grad_inner(f, p);
  AtomicMeasure nu = cfg.nu();
  const double T2 = cfg.horizon;       // late checkpoint T'
  const double T1 = 0.5 * cfg.horizon; // fluctuation checkpoint t
  const long long R = cfg.replicas;

  ExperimentReport rep;
  double sigma_sq = 0.0;
  if (regime == Regime::Slow) sigma_sq = sigma_slow(f, p).sigma_sq;
  if (regime == Regime::Critical) sigma_sq = sigma_critical(f, p).sigma_sq;

  if (regime != Regime::Fast) {
    rep.columns = {"replica_id", "survived", "mass", "v_t", "v_hat", "c2", "c3"};
    rep.rows.assign(R, {});
    BirthDeathChain bd = BirthDeathChain::for_scheme(p, cfg.n, Mechanism::Super);
    std::vector<CompiledPoly> fs{CompiledPoly(f)};
    double e_at = std::exp(-p.alpha * T1);
    std::atomic<long long> aborted{0};
    parallel_for(R, cfg.workers, [&](long long i) {
      RngStream rng(cfg.seed, (uint64_t)i);
      ReducedSample rs = sample_population_at(nu, T1, cfg.n, Mechanism::Super, p, fs, rng);
      if (rs.aborted) {
        aborted.fetch_add(1);
        rep.rows[i] = {(double)i, 0, 0, 0, 0, 0, 0};
        return;
      }
      long long m2 = bd.forward_population(rs.count, T2 - T1, rng);
      double mass = (double)rs.count / (double)cfg.n;
      double v_t = e_at * mass;
      double v_hat = std::exp(-p.alpha * T2) * (double)m2 / (double)cfg.n;
      double c2 = 0.0, c3 = 0.0;
      if (rs.count > 0) {
        c2 = (mass - std::exp(p.alpha * T1) * v_hat) / std::sqrt(mass);
        double F = regime == Regime::Slow ? std::sqrt(mass) : std::sqrt(T1 * mass);
        c3 = (rs.sums[0] / (double)cfg.n - mass * f_phi) / F;
      }
      rep.rows[i] = {(double)i, m2 > 0 ? 1.0 : 0.0, mass, v_t, v_hat, c2, c3};
    });
    if (aborted.load() > 0)
      rep.verdicts.push_back({"population_cap", false,
                              std::to_string(aborted.load()) + " replicas hit the leaf budget"});

    rep.summary["from_rows"] = summarize_rows(rep.columns, rep.rows, "regime");
    auto cond = rep.summary["from_rows"]["conditional"];
    long long survivors = cond["survivors"].get<long long>();
    if (survivors < 2) {
      rep.verdicts.push_back({"survivors", false, "fewer than two surviving replicas"});
    } else {
      double var_c3 = cond["c3_var"].get<double>();
      double tol = regime == Regime::Slow ? 0.20 : 0.25;
      rep.summary["targets"]["sigma_sq"] = sigma_sq;
      rep.verdicts.push_back({"variance_match", std::fabs(var_c3 - sigma_sq) <= tol * sigma_sq,
                              "var(c3|survival) = " + fmt(var_c3) + ", target " + fmt(sigma_sq) +
                                  " (tol " + fmt(tol * 100) + "%)"});
      // KS of c3 standardized by an analytic variance, never one fitted to
      // the sample.  In the slow regime the limit sigma^2 is reached up to an
      // exponentially small remainder at these horizons.  In the critical
      // regime the exact normalized second moment at time t differs from the
      // limit by O(1/t), which a KS test at realistic replica counts can see,
      // so the exact finite-t value (which criterion-style checks tie back to
      // sigma^2 separately) is the honest reference for the shape test.
      double ks_std_sq = sigma_sq;
      if (regime == Regime::Critical) {
        MomentEngine eng(p);
        auto [u2, u2_err] = eng.u_poly(ft, T1, 2, Mechanism::Super);
        (void)u2_err;
        double num = 0.0, den = 0.0;
        for (const auto& atom : nu.atoms()) {
          double mi = std::floor((double)cfg.n * atom.mass) / (double)cfg.n;
          num += -mi * u2.eval(atom.x);
          den += mi;
        }
        ks_std_sq = num / (T1 * std::exp(p.alpha * T1) * den);
        rep.summary["targets"]["finite_t_variance"] = ks_std_sq;
      }
      std::vector<double> c3_s;
      int cs = col_index(rep.columns, "survived"), cc = col_index(rep.columns, "c3");
      for (const auto& r : rep.rows)
        if (r[cs] != 0.0) c3_s.push_back(r[cc] / std::sqrt(ks_std_sq));
      KsResult ks = ks_one_sample(c3_s, [](double z) { return normal_cdf(z); });
      rep.summary["tests"]["ks_statistic"] = ks.statistic;
      rep.summary["tests"]["ks_p_value"] = ks.p_value;
      rep.verdicts.push_back({"ks_gaussian", ks.p_value > 0.01,
                              "KS p = " + fmt(ks.p_value) + " (level 1%, reference var " +
                                  fmt(ks_std_sq) + ")"});
      double bound = 4.0 / std::sqrt((double)survivors);
      double r12 = cond["corr_c1_c2"].get<double>();
      double r13 = cond["corr_c1_c3"].get<double>();
      double r23 = cond["corr_c2_c3"].get<double>();
      bool ind = std::fabs(r12) <= bound && std::fabs(r13) <= bound && std::fabs(r23) <= bound;
      rep.verdicts.push_back({"independence", ind,
                              "corr(c1,c2) = " + fmt(r12) + ", corr(c1,c3) = " + fmt(r13) +
                                  ", corr(c2,c3) = " + fmt(r23) + ", bound " + fmt(bound)});
      // conditioning sanity at the late horizon
      double m0 = std::floor((double)cfg.n * nu.total_mass()) / (double)cfg.n;
      double pext = extinction_probability(m0, p);
      double frac = 1.0 - (double)survivors / (double)R;
      double se = std::sqrt(pext * (1.0 - pext) / (double)R);
      rep.verdicts.push_back({"survival_fraction", std::fabs(frac - pext) <= 3.0 * se + 2e-3,
                              "extinct fraction " + fmt(frac) + " vs " + fmt(pext)});
    }
  } else {
    // fast regime: brute-force trajectories, two checkpoints, residual decay
    rep.columns = {"replica_id", "survived", "aborted", "mass", "v_t", "y1_a", "y1_b"};
    for (int j = 0; j < p.dim; ++j) rep.columns.push_back("h" + std::to_string(j + 1) + "_a");
    for (int j = 0; j < p.dim; ++j) rep.columns.push_back("h" + std::to_string(j + 1) + "_b");
    rep.columns.push_back("res_a");
    rep.columns.push_back("res_b");
    rep.rows.assign(R, {});
    parallel_for(R, cfg.workers, [&](long long i) {
      RngStream rng(cfg.seed, (uint64_t)i);
      std::vector<double> row(rep.columns.size(), 0.0);
      row[0] = (double)i;
      int step = 0;
      simulate_with_checkpoints(
          nu, {T1, T2}, cfg.n, Mechanism::Super, p, rng,
          [&](const ParticleSystem& st) {
            if (st.aborted) {
              row[2] = 1.0;
              return;
            }
            Functionals fu = evaluate_functionals(st, f, p);
            double Ft = std::exp((p.alpha - p.mu) * st.current_time);
            double y1 = (fu.integral_f - fu.mass * f_phi) / Ft;
            double gh = 0.0;
            for (int j = 0; j < p.dim; ++j) gh += grad[j] * fu.h_value[j];
            if (step == 0) {
              row[5] = y1;
              for (int j = 0; j < p.dim; ++j) row[7 + j] = fu.h_value[j];
              row[7 + 2 * p.dim] = std::fabs(y1 - gh);
            } else {
              row[1] = st.survived() ? 1.0 : 0.0;
              row[3] = fu.mass;
              row[4] = std::exp(-p.alpha * T2) * fu.mass;
              row[6] = y1;
              for (int j = 0; j < p.dim; ++j) row[7 + p.dim + j] = fu.h_value[j];
              row[8 + 2 * p.dim] = std::fabs(y1 - gh);
            }
            ++step;
          },
          cfg.pop_cap);
      rep.rows[i] = row;
    });
    rep.summary["from_rows"] = summarize_rows(rep.columns, rep.rows, "fast");
    int ca = col_index(rep.columns, "aborted"), cs = col_index(rep.columns, "survived");
    int cra = col_index(rep.columns, "res_a"), crb = col_index(rep.columns, "res_b");
    std::vector<double> res_a, res_b;
    long long n_aborted = 0;
    for (const auto& r : rep.rows) {
      if (r[ca] != 0.0) {
        ++n_aborted;
        continue;
      }
      if (r[cs] == 0.0) continue;
      res_a.push_back(r[cra]);
      res_b.push_back(r[crb]);
    }
    rep.summary["tests"]["aborted"] = n_aborted;
    if (res_b.empty()) {
      rep.verdicts.push_back(
          {"fast_residual_halving", false,
           "no surviving trajectory reached the late checkpoint (population cap " +
               std::to_string(cfg.pop_cap) + "; expected population ~ n*e^{alpha*t})"});
    } else {
      double ma = median_of(res_a), mb = median_of(res_b);
      rep.summary["tests"]["median_res_a"] = ma;
      rep.summary["tests"]["median_res_b"] = mb;
      rep.verdicts.push_back({"fast_residual_halving", mb <= 0.5 * ma,
                              "median residual " + fmt(mb) + " at t = " + fmt(T2) + " vs " +
                                  fmt(ma) + " at t = " + fmt(T1)});
    }
  }

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  rep.manifest = {{"suite", "regime"},
                  {"regime", regime_name(regime)},
                  {"config", cfg.to_json()},
                  {"config_hash", cfg.config_hash()},
                  {"runtime_seconds", secs}};
  return rep;
}

// ---------------------------------------------------------------------------
// mass-law suite

ExperimentReport run_mass_law_suite(const ExperimentConfig& cfg) {
  auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  ModelParams p = cfg.params();
  AtomicMeasure nu = cfg.nu();
  const long long R = cfg.replicas;

  ExperimentReport rep;
  rep.columns = {"replica_id", "survived", "mass_a", "mass_b", "extinct"};
  rep.rows.assign(R, {});
  BirthDeathChain bd = BirthDeathChain::for_scheme(p, cfg.n, Mechanism::Super);
  parallel_for(R, cfg.workers, [&](long long i) {
    RngStream rng(cfg.seed, (uint64_t)i);
    ParticleSystem st = simulate_superprocess(nu, cfg.laplace_t, cfg.n, Mechanism::Super, p, rng,
                                              cfg.pop_cap);
    long long m1 = st.count();
    // branching is independent of motion: continue the autonomous mass chain
    long long mk = bd.forward_population(m1, cfg.ks_t - cfg.laplace_t, rng);
    long long mh = bd.forward_population(mk, cfg.horizon - cfg.ks_t, rng);
    rep.rows[i] = {(double)i, mh > 0 ? 1.0 : 0.0, (double)m1 / (double)cfg.n,
                   (double)mk / (double)cfg.n, mh > 0 ? 0.0 : 1.0};
  });

  rep.summary["from_rows"] = summarize_rows(rep.columns, rep.rows, "mass");
  double m0 = 0.0;
  for (const auto& atom : nu.atoms()) m0 += std::floor((double)cfg.n * atom.mass) / (double)cfg.n;

  int cm = col_index(rep.columns, "mass_a");
  for (double theta : cfg.theta_grid) {
    std::vector<double> vals;
    for (const auto& r : rep.rows) vals.push_back(std::exp(-theta * r[cm]));
    double emp = mean(vals);
    double se = std::sqrt(variance(vals) / (double)R);
    double target = std::exp(-m0 * total_mass_laplace(theta, cfg.laplace_t, p));
    rep.summary["tests"]["laplace"][fmt(theta)] = {{"empirical", emp}, {"target", target}, {"se", se}};
    rep.verdicts.push_back({"laplace_theta_" + fmt(theta), std::fabs(emp - target) <= 4.0 * se,
                            "E e^{-theta|X_t|}: " + fmt(emp) + " vs " + fmt(target) + " (4se = " +
                                fmt(4.0 * se) + ")"});
  }

  int ce = col_index(rep.columns, "extinct");
  double frac = mean(column_values(rep.rows, ce));
  double pext = extinction_probability(m0, p);
  double se_b = std::sqrt(pext * (1.0 - pext) / (double)R);
  rep.summary["tests"]["extinction"] = {{"empirical", frac}, {"target", pext}};
  rep.verdicts.push_back({"extinction_fraction", std::fabs(frac - pext) <= 3.0 * se_b,
                          fmt(frac) + " vs " + fmt(pext) + " (3se = " + fmt(3.0 * se_b) + ")"});

  std::vector<double> v_emp;
  int cb = col_index(rep.columns, "mass_b");
  double e_akt = std::exp(-p.alpha * cfg.ks_t);
  for (const auto& r : rep.rows) v_emp.push_back(e_akt * r[cb]);
  std::vector<double> v_draws;
  for (long long i = 0; i < cfg.v_draws; ++i) {
    RngStream rng(cfg.seed, kAuxStreamBase + (uint64_t)i);
    v_draws.push_back(sample_v_infinity(m0, p, rng));
  }
  KsResult ks = ks_two_sample(v_emp, v_draws);
  double crit = ks_two_sample_critical(0.01, ks.n, ks.m);
  rep.summary["tests"]["mass_law_ks"] = {{"statistic", ks.statistic}, {"critical_1pct", crit}};
  rep.verdicts.push_back({"mass_law_ks", ks.statistic < crit,
                          "D = " + fmt(ks.statistic) + " vs critical " + fmt(crit)});

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  rep.manifest = {{"suite", "mass"},
                  {"config", cfg.to_json()},
                  {"config_hash", cfg.config_hash()},
                  {"runtime_seconds", secs}};
  return rep;
}

// ---------------------------------------------------------------------------
// backbone suite

ExperimentReport run_backbone_suite(const ExperimentConfig& cfg) {
  auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  ModelParams p = cfg.params();
  AtomicMeasure nu = cfg.nu();
  const long long R = cfg.replicas;
  const double T = cfg.ks_t;
  const double ta = 0.2 * T, tb = 0.5 * T;

  ExperimentReport rep;
  rep.columns = {"replica_id", "n0", "w_a", "w_b", "w_t"};
  for (int j = 0; j < p.dim; ++j) rep.columns.push_back("i" + std::to_string(j + 1));
  rep.rows.assign(R, {});
  double lam_nu = p.lambda_star() * nu.total_mass();

  parallel_for(R, cfg.workers, [&](long long i) {
    RngStream rng(cfg.seed, (uint64_t)i);
    long long n0 = rng.poisson(lam_nu);
    AtomicMeasure gamma(p.dim);
    for (long long k = 0; k < n0; ++k) {
      // position from the normalized initial measure
      double u = rng.uniform() * nu.total_mass();
      double acc = 0.0;
      for (const auto& atom : nu.atoms()) {
        acc += atom.mass;
        if (u <= acc || &atom == &nu.atoms().back()) {
          gamma.add_atom(atom.x, 1.0);
          break;
        }
      }
    }
    std::vector<double> row(rep.columns.size(), 0.0);
    row[0] = (double)i;
    row[1] = (double)n0;
    if (n0 > 0) {
      BackboneState st = simulate_backbone(gamma, T, p, rng, false, cfg.pop_cap);
      row[2] = std::exp(-p.alpha * ta) * (double)backbone_count_at(st, n0, ta);
      row[3] = std::exp(-p.alpha * tb) * (double)backbone_count_at(st, n0, tb);
      MartingalePair mp = backbone_martingales(st, p);
      row[4] = mp.W;
      for (int j = 0; j < p.dim; ++j) row[5 + j] = mp.I[j];
    }
    rep.rows[i] = row;
  });

  rep.summary["from_rows"] = summarize_rows(rep.columns, rep.rows, "backbone");
  auto col = [&](const std::string& name) {
    return column_values(rep.rows, col_index(rep.columns, name));
  };
  std::vector<double> wa = col("w_a"), wb = col("w_b"), wt = col("w_t");

  // martingale constancy: paired differences against the final time
  for (auto [other, tag] : {std::make_pair(&wa, "a"), std::make_pair(&wb, "b")}) {
    std::vector<double> diff(wt.size());
    for (size_t i = 0; i < wt.size(); ++i) diff[i] = (*other)[i] - wt[i];
    double md = mean(diff), se = std::sqrt(variance(diff) / (double)diff.size());
    rep.verdicts.push_back({std::string("w_mean_constant_") + tag, std::fabs(md) <= 3.0 * se,
                            "mean(W_" + std::string(tag) + " - W_end) = " + fmt(md) +
                                " (3se = " + fmt(3.0 * se) + ")"});
  }

  double scale = p.beta / p.alpha;
  std::vector<double> v_emp(wt.size());
  for (size_t i = 0; i < wt.size(); ++i) v_emp[i] = scale * wt[i];
  double mv = mean(v_emp), se_v = std::sqrt(variance(v_emp) / (double)v_emp.size());
  rep.verdicts.push_back({"w_mean_value", std::fabs(mv - nu.total_mass()) <= 3.0 * se_v,
                          "mean (beta/alpha) W = " + fmt(mv) + " vs " + fmt(nu.total_mass())});

  std::vector<double> v_draws;
  for (long long i = 0; i < cfg.v_draws; ++i) {
    RngStream rng(cfg.seed, kAuxStreamBase + (uint64_t)i);
    v_draws.push_back(sample_v_infinity(nu.total_mass(), p, rng));
  }
  KsResult ks = ks_two_sample(v_emp, v_draws);
  double crit = ks_two_sample_critical(0.01, ks.n, ks.m);
  rep.summary["tests"]["backbone_ks"] = {{"statistic", ks.statistic}, {"critical_1pct", crit}};
  rep.verdicts.push_back({"backbone_ks", ks.statistic < crit,
                          "D = " + fmt(ks.statistic) + " vs critical " + fmt(crit)});

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  rep.manifest = {{"suite", "backbone"},
                  {"config", cfg.to_json()},
                  {"config_hash", cfg.config_hash()},
                  {"runtime_seconds", secs}};
  return rep;
}

void write_report(const ExperimentReport& rep, const std::string& out_dir) {
  std::string csv_path = out_dir + "/rows.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("write_report: cannot open " + csv_path);
  for (size_t c = 0; c < rep.columns.size(); ++c) csv << (c ? "," : "") << rep.columns[c];
  csv << "\n";
  for (const auto& r : rep.rows) {
    for (size_t c = 0; c < r.size(); ++c) csv << (c ? "," : "") << fmt(r[c]);
    csv << "\n";
  }
  csv.close();

  nlohmann::json j;
  j["summary"] = rep.summary;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : rep.verdicts) vs.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = vs;
  j["manifest"] = rep.manifest;
  std::ofstream js(out_dir + "/report.json");
  if (!js) throw std::runtime_error("write_report: cannot open report.json");
  js << j.dump(2) << "\n";
}

}  // namespace ousp
