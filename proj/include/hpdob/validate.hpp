#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hpdob {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Informational checks are reported but never fail the suite.
  bool informational = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationOptions {
  /// Added to A_d(0, 1) before comparing against the series oracle. Test hook
  /// for demonstrating that the discretization check can fail.
  double perturb_ad = 0.0;
  unsigned seed = 20240611;
};

/// Numerical self-checks: discretization against the series oracle, the
/// derivative-matching property of the nominal disturbance, exactness of the
/// observer error recursions on the discrete model, and the quadrature of the
/// exact disturbance input.
std::vector<CheckResult> run_validation(const ValidationOptions& opts = {});

/// Prints one line per check; returns true when no non-informational check
/// failed.
bool report_validation(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace hpdob
