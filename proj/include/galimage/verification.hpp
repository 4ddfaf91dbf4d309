#pragma once

/**
 * @file verification.hpp
 * @brief The twelve reproducibility checks shared by the acceptance binary and
 *        the verify-paper command.  Each check is exact and reports its own
 *        wall-clock time in whole milliseconds.
 */

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace galimage {

inline constexpr int kCheckCount = 12;
inline constexpr std::uint64_t kDefaultCheckSeed = 20240611;

struct CheckOptions {
  std::uint64_t seed = kDefaultCheckSeed;
  unsigned threads = 1;
};

struct CheckResult {
  int id = 0;
  /// Short name of the computation being checked.
  std::string name;
  /// The operation(s) exercised, for the report.
  std::string operation;
  bool pass = false;
  std::string detail;
  std::int64_t ms = 0;
};

/// Runs check id in [1, kCheckCount].  Throws DomainError on an unknown id.
CheckResult run_check(int id, const CheckOptions& opts = {});
std::vector<CheckResult> run_all_checks(const CheckOptions& opts = {});

/// One "check N: PASS|FAIL name (X ms) detail" line.
std::string format_check_line(const CheckResult& r);
/// Markdown table of results.
std::string checks_markdown(const std::vector<CheckResult>& results);

}  // namespace galimage
