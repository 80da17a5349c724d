#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string title;
  double time_limit_s = 0.0;  // 0: no runtime bound
  std::function<Outcome()> check;
};

std::vector<Criterion> criteria();

/// Runs every criterion, printing one PASS/FAIL line each; true iff all pass.
bool run_all(std::ostream& out);

}  // namespace acceptance
