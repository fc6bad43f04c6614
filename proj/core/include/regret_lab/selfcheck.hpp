#pragma once

// Fast invariant sweep behind `regret-lab selftest`.

#include <string>
#include <vector>

namespace regret_lab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CheckResult> run_selfchecks();

}  // namespace regret_lab
