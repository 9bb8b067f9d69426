#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ousp/measure.hpp"
#include "ousp/model.hpp"
#include "ousp/polynomial.hpp"

namespace ousp {

// Key-value experiment configuration.  File grammar: one "key = value" pair
// per line, '#' starts a comment; unknown keys are rejected.  Flag overrides
// re-use the same key names and win over file values.
struct ExperimentConfig {
  double sigma = 1.0, mu = 1.0, alpha = 1.0, beta = 1.0;
  int dim = 1;
  std::string f_text = "x1";
  std::string nu_text = "1 @ 0";  // semicolon-separated "mass @ x1,..,xd"
  double horizon = 2.0;           // regime suite: T', with checkpoint t = T'/2
  long long n = 200;
  long long replicas = 1000;
  uint64_t seed = 20260826;
  int workers = 1;
  std::string regime_text;                 // optional; must match the params
  std::string survival_proxy = "alive";    // "alive" or "mass_median"
  std::string out_dir = ".";
  std::vector<double> theta_grid = {0.5, 1.0, 2.0};
  double laplace_t = 1.0;  // mass-law suite observation time
  double ks_t = 10.0;      // mass-law / backbone distributional checkpoint
  long long v_draws = 10000;
  long long pop_cap = 2'000'000;

  ModelParams params() const;
  Polynomial f() const;
  AtomicMeasure nu() const;
  void set(const std::string& key, const std::string& value);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
  uint64_t config_hash() const;
  void validate() const;  // throws on inconsistency (regime mismatch etc.)
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // one row per replica, sorted by id
  nlohmann::json summary;
  std::vector<Verdict> verdicts;
  nlohmann::json manifest;

  bool all_pass() const;
};

// Fluctuation-triple experiment for the regime matching cfg.params().regime().
ExperimentReport run_regime_experiment(const ExperimentConfig& cfg);

// Total-mass suite: Laplace transform grid, extinction fraction, late-time
// mass law against the compound-Poisson limit sampler.
ExperimentReport run_mass_law_suite(const ExperimentConfig& cfg);

// Backbone suite: W-martingale constancy, mean of (beta/alpha) W, and the
// distributional link to the mass-limit sampler.
ExperimentReport run_backbone_suite(const ExperimentConfig& cfg);

// Writes report.json and rows.csv (UTF-8, newline-terminated, %.17g floats).
void write_report(const ExperimentReport& rep, const std::string& out_dir);

// Recompute the summary block from rows alone (report integrity checks).
nlohmann::json summarize_rows(const std::vector<std::string>& columns,
                              const std::vector<std::vector<double>>& rows,
                              const std::string& suite);

}  // namespace ousp
