#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mapgame::acceptance {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  // Names of criteria to run; empty runs all.
  std::vector<std::string> only;
  std::ostream* log = nullptr;  // progress notes
};

const std::vector<std::string>& criterion_names();

// Runs the property suites and prints one PASS/FAIL line per criterion to out.
std::vector<CriterionResult> run(const SuiteOptions& options, std::ostream& out);

}  // namespace mapgame::acceptance
