#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace joycekit {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;    // measured defects; depends only on the inputs
  double seconds = 0.0;  // wall time, for the console line only
};

struct SelfTestRun {
  std::vector<CriterionResult> criteria;
  nlohmann::ordered_json report;  // serializes criteria without timings
  bool all_pass = true;
};

// One pass over the eight verification properties at desk scale.  Each
// criterion also fails when its wall-time budget is exceeded.
SelfTestRun run_selftest();

struct AcceptanceOutcome {
  SelfTestRun run;
  bool deterministic = false;  // rendered reports byte-identical twice
};

// run_selftest twice, compare the rendered reports byte for byte, and fold
// the outcome into the last criterion and the report's all_pass field.
AcceptanceOutcome run_acceptance_suite();

}  // namespace joycekit
