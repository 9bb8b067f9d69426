// Acceptance sweep: one line per criterion, non-zero exit if any fails.
// OUSP_ACCEPT_QUICK=1 selects the reduced-scale variant used for fast local
// iteration; the registered ctest invocation runs the full version.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "ousp/acceptance.hpp"

int main(int argc, char** argv) {
  bool quick = false;
  const char* env = std::getenv("OUSP_ACCEPT_QUICK");
  if (env && std::strcmp(env, "0") != 0) quick = true;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  uint64_t seed = 20260826ULL;
  if (const char* s = std::getenv("OUSP_SEED")) seed = std::strtoull(s, nullptr, 10);
  int workers = 1;
  if (const char* w = std::getenv("OUSP_WORKERS")) workers = std::atoi(w);

  auto results = ousp::run_acceptance(quick, workers, seed, "acceptance_out");
  bool ok = true;
  for (const auto& r : results) {
    std::printf("criterion %2d %-34s %s  (%.1fs)  %s\n", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    ok = ok && r.pass;
  }
  std::printf("acceptance: %s (%s mode)\n", ok ? "all criteria passed" : "FAILURES PRESENT",
              quick ? "quick" : "full");
  return ok ? 0 : 1;
}
