#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rqmc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string measured;  // human-readable measured values and thresholds
};

struct AcceptanceOptions {
  std::uint64_t master_seed = 20250601;
  unsigned threads = 1;
  std::vector<int> criteria;  // empty = all ten
};

struct AcceptanceRun {
  std::vector<CriterionResult> results;
  std::string csv;  // summary rows of criteria 1-9, in criterion order

  bool all_passed() const;
};

/// Runs the selected criteria at their fixed scales. Progress and timings go
/// to `progress` when non-null; nothing timing-dependent enters the CSV.
AcceptanceRun run_acceptance(const AcceptanceOptions& options, std::ostream* progress = nullptr);

/// "[PASS] 3 nested CLT ...: <measured>".
std::string format_result_line(const CriterionResult& result);

}  // namespace rqmc
