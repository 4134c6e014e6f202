#pragma once

// Desk-scale invariant suites runnable from the CLI. Each suite checks one
// family of identities at its native tolerance and reports pass/fail.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace tpmlab::selftest {

struct Options {
  std::uint64_t seed = 20260809;
  // Test hook: corrupts the jarzynski-identity tolerance so the negative
  // path (a failing suite) can be exercised end to end.
  bool inject_failure = false;
};

struct SuiteResult {
  std::string name;
  bool passed;
  std::string detail;  // worst observed error or a short diagnosis
};

/// Names of all registered suites, in execution order.
std::vector<std::string> suite_names();

/// Runs every suite; optionally streams one "[PASS|FAIL] name" line each.
std::vector<SuiteResult> run_all(const Options& options = {}, std::ostream* progress = nullptr);

}  // namespace tpmlab::selftest
