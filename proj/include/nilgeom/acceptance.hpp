#pragma once

#include <string>
#include <vector>

namespace nilgeom::acceptance {

struct CriterionResult {
  int number = 0;
  std::string label;
  bool pass = false;
  std::vector<std::string> details;  // ledger lines for this criterion
};

// Runs the twelve-point verification ledger over the built-in models (both
// families, both signs): structure-equation closure, non-nilpotency, the
// realifications, the balanced conditions, the complete Family I and Family II
// curvature pipelines, both anomaly theorems, the instanton remark, the
// SU(3)-structure sanity checks, randomized property suites, and the numeric
// cross-check of every symbolic identity at random rational points.
std::vector<CriterionResult> run_all();

// One "criterion N: pass|FAIL -- label" line per criterion, with indented
// ledger details, and a final "acceptance: K/12 passed" line.
std::string render(const std::vector<CriterionResult>& results);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace nilgeom::acceptance
