#pragma once
// Acceptance gate: ten numbered end-to-end checks, each with tolerances and
// runtime limits pinned here (not configurable).  Oracles that guard counting
// paths use local trial division on purpose, so a library bug cannot cancel
// itself out.

#include <string>
#include <vector>

namespace psq::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double elapsed_ms = 0.0;
  double limit_ms = 0.0;  // 0 = no runtime limit
  std::string detail;     // measured numbers, human-readable
};

// ids are stable: 1..10.
std::vector<int> criterion_ids();
const char* criterion_name(int id);

// Runs one criterion (throws std::invalid_argument for unknown ids).
CriterionResult run_criterion(int id, int workers = 0);

// Runs the whole gate in id order.
std::vector<CriterionResult> run_all(int workers = 0);

}  // namespace psq::verify
