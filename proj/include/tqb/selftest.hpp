#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace tqb {

enum class CheckStatus { Pass, Fail, Rejected };

struct CheckResult {
  std::string name;
  double h = 0.0;  // knot spacing, 0 for checks that do not depend on it
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct SelftestOptions {
  std::vector<double> h_grid{0.01, 0.1, 0.5};
  int random_systems = 200;
  std::uint32_t seed = 12345;
  // Relative perturbation applied to alpha_1 before checking; a negative
  // control for the stencil checks.
  double alpha_perturbation = 0.0;
};

/// alpha_1..alpha_13 from their closed forms in c = cos(h/2), s = sin(h/2).
std::array<double, 13> closed_form_weights(double h);

/// C4 continuity across the knots of T_0, stencil weights against the closed
/// forms and against direct basis evaluation, and the small-h 1:26:66 limit.
std::vector<CheckResult> basis_checks(double h, double alpha_perturbation = 0.0);

/// Banded LU against dense elimination on random diagonally dominant systems.
CheckResult banded_oracle_check(int systems, std::uint32_t seed);

std::vector<CheckResult> run_selftest(const SelftestOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

const char* to_string(CheckStatus status);

}  // namespace tqb
