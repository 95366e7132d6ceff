#include <chrono>
#include <cstdio>
#include <exception>

#include "conelight/suite.hpp"

using namespace conelight;

// Runs every acceptance criterion on the default configuration and prints one verdict line each.
int main() {
  try {
    const RunConfig c;
    c.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<CriterionResult> rs = run_suite(c);
    bool all = true;
    for (const CriterionResult& r : rs) {
      std::printf("criterion %d (%s): %s  %s\n", r.number, r.id.c_str(), r.pass ? "PASS" : "FAIL", r.summary.c_str());
      all = all && r.pass;
    }
    std::fprintf(stderr, "suite wall time %.1f s\n",
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 3;
  }
}
