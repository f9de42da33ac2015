#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace entspec {

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;   // |computed - expected|, or the measured distance
  double tolerance = 0.0;
  std::string detail;      // exception text when the check threw
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::Fast;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Fast: analytic identities only (seconds). Full adds the N = 64 Newton
/// oracle, Metropolis thermometry and Haar sampling at N = 256 (minutes).
VerifyReport run_verify(VerifyLevel level, std::uint64_t seed = 0);

}  // namespace entspec
