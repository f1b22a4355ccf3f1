#pragma once

// Property suites: randomized checks of the geometric theorems, with a
// deterministic report.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdcone/random.hpp"

namespace spdcone {

struct SuiteFailure {
  std::uint64_t trial = 0;
  std::string description;
  double measured = 0.0;
  double bound = 0.0;
};

struct SuiteReport {
  std::string name;
  std::string claim;  // the theorem under test, in words
  std::uint64_t seed = 0;
  int n = 0;
  int trials = 0;
  long checks = 0;
  std::vector<SuiteFailure> failures;  // sorted by trial
  double max_violation;                // -inf when nothing was checked
  double wall_time = 0.0;              // seconds; not part of to_json

  bool passed() const { return failures.empty(); }
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs `trials` independent trials. Throws UsageError for unknown names.
/// Parallelism is capped by SPDCONE_THREADS.
SuiteReport run_suite(const std::string& name, const RandomModel& model, int trials);

/// Deterministic JSON form (wall_time omitted).
nlohmann::json to_json(const SuiteReport& r);

/// Worker count: SPDCONE_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
int thread_budget();

}  // namespace spdcone
