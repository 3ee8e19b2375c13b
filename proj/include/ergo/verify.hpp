#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ergo/export.hpp"

namespace ergo {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  Json data;  // numbers behind the verdict
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;  // random probe pairs and triples
  int subaction_grid = 6144;
  int thermo_grid = 4096;
};

/// One entry per acceptance criterion, in order.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt = {});

/// "[PASS]  3 cohomology-residuals  <detail>"
std::string summary_line(const CheckResult& r);

}  // namespace ergo
