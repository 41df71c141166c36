#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast self-consistency sweep over every module's invariants at small scales.
// Returns one row per check; any failure maps to exit code 1 in the CLI.
std::vector<CheckResult> run_verify_suite(std::uint64_t seed);

}  // namespace slab
