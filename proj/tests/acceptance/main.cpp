#include <cstdio>

#include "joycekit/selftest.hpp"

// Runs every acceptance criterion twice (the second pass feeds the report
// determinism check) and prints one verdict line per criterion.
int main() {
  const joycekit::AcceptanceOutcome out = joycekit::run_acceptance_suite();
  for (const joycekit::CriterionResult& c : out.run.criteria) {
    std::printf("%s %s (%s) [%.2f s]\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.detail.c_str(), c.seconds);
  }
  std::printf("%s\n", out.run.all_pass ? "ALL PASS" : "FAILURES PRESENT");
  return out.run.all_pass ? 0 : 1;
}
