#pragma once

#include <functional>
#include <vector>

namespace dwl {

/// Settings of the scalar Dormand-Prince 5(4) integrator.
struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-9;
  double h0 = 1e-3;
  double h_min = 1e-13;
  /// Upper bound on the step; also bounds the spacing of the recorded samples.
  double h_max = 0.05;
  long max_steps = 20'000'000;
  /// The exact solutions of the comparison equations stay nonnegative; a negative
  /// value can only come from round-off and is reset to zero.
  bool clip_nonnegative = true;
  /// Points where the right-hand side is not smooth. Integration restarts at each.
  std::vector<double> breakpoints;
};

struct Trajectory {
  std::vector<double> t, y;
  int clipped = 0;

  double final_value() const { return y.empty() ? 0.0 : y.back(); }
  double max_value() const;
};

using ScalarRhs = std::function<double(double t, double y)>;

/// Integrate y' = rhs(t, y) from (t0, y0) to t1 and record every accepted step.
/// Throws StepUnderflow if the step shrinks below h_min.
Trajectory integrate_rk45(const ScalarRhs& rhs, double y0, double t0, double t1, const OdeOptions& opts = {});

}  // namespace dwl
