#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ousp {

// One end-to-end check of the lab against an analytic oracle or a stated
// statistical property. Tolerances are pinned in the implementation.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs all twelve criteria in order, writing per-criterion artifacts under
// out_dir. quick = reduced replica counts and feasible fast-regime scale.
std::vector<CriterionResult> run_acceptance(bool quick, int workers, uint64_t seed,
                                            const std::string& out_dir);

}  // namespace ousp
