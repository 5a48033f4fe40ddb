#include "dwl/comparison/ode.hpp"

#include <algorithm>
#include <cmath>

#include "dwl/errors.hpp"

namespace dwl {

double Trajectory::max_value() const {
  return y.empty() ? 0.0 : *std::max_element(y.begin(), y.end());
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

void integrate_piece(const ScalarRhs& f, double& t, double& y, double t_end, double& h,
                     const OdeOptions& o, Trajectory& out, long& steps) {
  double k1 = f(t, y);
  while (t < t_end) {
    if (++steps > o.max_steps) throw StepUnderflow("integrate_rk45: step budget exhausted");
    h = std::min({h, o.h_max, t_end - t});
    const bool last = (t + h >= t_end);
    const double k2 = f(t + c2 * h, y + h * a21 * k1);
    const double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(t + h, y_new);
    const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale = o.atol + o.rtol * std::max(std::abs(y), std::abs(y_new));
    const double ratio = std::abs(err) / scale;
    if (!std::isfinite(y_new)) throw OverflowError("integrate_rk45: solution is not finite");
    if (ratio <= 1.0) {
      t = last ? t_end : t + h;
      y = y_new;
      k1 = k7;
      if (o.clip_nonnegative && y < 0.0) {
        y = 0.0;
        k1 = f(t, y);
        ++out.clipped;
      }
      out.t.push_back(t);
      out.y.push_back(y);
      const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -0.2));
      h *= std::max(grow, 0.2);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(ratio, -0.2));
      if (h < o.h_min) throw StepUnderflow("integrate_rk45: step size underflow");
    }
  }
}

}  // namespace

Trajectory integrate_rk45(const ScalarRhs& rhs, double y0, double t0, double t1, const OdeOptions& opts) {
  if (!(t1 >= t0)) throw InvalidArgument("integrate_rk45: t1 must not precede t0");
  if (!(opts.rtol > 0 && opts.atol > 0 && opts.h_max > 0)) throw InvalidArgument("integrate_rk45: bad tolerances");
  Trajectory out;
  out.t.push_back(t0);
  out.y.push_back(y0);

  std::vector<double> stops;
  for (double b : opts.breakpoints)
    if (b > t0 && b < t1) stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  stops.push_back(t1);

  double t = t0, y = y0, h = opts.h0;
  long steps = 0;
  for (double stop : stops) {
    if (stop <= t) continue;
    integrate_piece(rhs, t, y, stop, h, opts, out, steps);
    h = std::max(h, opts.h0);  // a kink often sits right before a smooth stretch
  }
  return out;
}

}  // namespace dwl
