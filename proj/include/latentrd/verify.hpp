#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace latentrd::verify {

/// One randomized inequality or moment check. slack is rhs - lhs for
/// inequalities and (z_limit - |z|) for Monte Carlo moment checks; a check
/// passes when no trial has slack < -tolerance.
struct CheckResult {
  std::string name;
  long trials = 0;
  long violations = 0;
  double worst_slack = 0.0;
  double tolerance = 0.0;

  [[nodiscard]] bool passed() const noexcept { return violations == 0; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  long trials = 0;
  std::vector<CheckResult> checks;
  /// Estimates and counters reported alongside the checks.
  std::vector<std::pair<std::string, double>> stats;

  [[nodiscard]] bool passed() const noexcept;
  [[nodiscard]] long violations() const noexcept;
  [[nodiscard]] const CheckResult& check(std::string_view name) const;
  [[nodiscard]] double stat(std::string_view name) const;
};

struct SuiteOptions {
  double delta = 0.3;   ///< moments_spherical noise scale
  int d = 8;            ///< moments_spherical dimension
  int max_n = 20;       ///< lemma31 / lemma32 size range
  int max_d = 20;
  double c_star = 0.5;  ///< principal_minor ratio
  unsigned threads = 0;
};

/// Registered suite names, excluding the "all" alias.
std::vector<std::string> suite_names();

/// Runs a registered suite. Throws LookupError for unknown names.
SuiteReport verify_inequality_suite(std::string_view name, long trials, std::uint64_t seed,
                                    const SuiteOptions& opts = {});

/// Runs every registered suite with the same trials and seed.
std::vector<SuiteReport> verify_all(long trials, std::uint64_t seed, const SuiteOptions& opts = {});

}  // namespace latentrd::verify
