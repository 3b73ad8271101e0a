#pragma once

#include <string>
#include <vector>

namespace checks {

struct CheckResult {
  std::string id;      // criterion id, e.g. "6"
  std::string name;    // sub-check description
  bool pass = false;
  std::string detail;  // measured values
  bool published = false;  // compares against a published number rather than an oracle
};

// Quick runs shrink the Monte Carlo sizes; used by `mstop validate`.
enum class Scale { Full, Quick };

std::vector<std::string> criterion_ids();
std::vector<CheckResult> run_criterion(const std::string& id, Scale scale);

}  // namespace checks
