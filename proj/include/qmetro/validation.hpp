#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmetro {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed error or margin for the check
  std::string detail;
};

/// Cross-validation sweep: closed forms against the numerically evolved
/// covariance, the determinant parity route, the fidelity-route Fisher
/// information, and small Fock-oracle spot checks. `grid` scales the number
/// of random points; `seed` fixes them.
std::vector<CheckResult> run_validation(int grid, std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace qmetro
