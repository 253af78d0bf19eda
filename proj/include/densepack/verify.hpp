#pragma once

// Self-check suite over the reference lattices and flux formulas.

#include <ostream>
#include <string>
#include <vector>

namespace densepack {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_verification();

/// Prints one line per check and a summary; returns true when all pass.
bool print_verification(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace densepack
