#include "dwl/kernels/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dwl/errors.hpp"
#include "dwl/kernels/bessel.hpp"

namespace dwl {

namespace {

constexpr double kPi = std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// Adaptive Gauss-Kronrod with an explicit convergence check.
double integrate_checked(const std::function<double(double)>& f, double a, double b, double tol,
                         double* err_out, const char* what) {
  double err = 0.0, l1 = 0.0;
  const double v = GK::integrate(f, a, b, 18, tol, &err, &l1);
  const double allowed = std::max(tol * l1, 1e-15);
  if (!std::isfinite(v) || err > 100.0 * allowed) {
    std::ostringstream msg;
    msg << what << ": adaptive quadrature did not converge (error " << err << ", allowed " << allowed << ")";
    throw ConvergenceFailure(msg.str());
  }
  if (err_out) *err_out = err;
  return v;
}

}  // namespace

void KernelParams::validate() const {
  if (!(epsilon > 0) || !(c > 0)) throw InvalidArgument("KernelParams: epsilon and c must be positive");
  if (series_terms < 1) throw InvalidArgument("KernelParams: series_terms must be at least 1");
  if (!(quad_tol > 0)) throw InvalidArgument("KernelParams: quad_tol must be positive");
}

KernelEval fundamental_k(double x_abs, double t, const KernelParams& params) {
  params.validate();
  if (x_abs < 0) throw InvalidArgument("fundamental_k: |x| must be nonnegative");
  if (t < 0) throw InvalidArgument("fundamental_k: t must be nonnegative");
  if (t == 0.0) return {0.0, 0.0};
  const double eps = params.epsilon, c = params.c;
  const double pref = 2.0 / std::sqrt(kPi * eps);

  if (x_abs < 1e-12) {
    // The inner integral tends to 1/2 as |x| -> 0, leaving an error function.
    return {std::erf(c * std::sqrt(t / eps)) / (2.0 * c), 1e-16};
  }

  const double r = x_abs;
  const double b = 2.0 * c * r / eps;
  // Over the whole range tau <= t the integrand exponent is at most
  // -r^2/(4 eps tau) + 2 c^2 tau / eps; far images are negligible.
  const double log_bound = -r * r / (4.0 * eps * t) + 2.0 * c * c * t / eps;
  if (log_bound < -80.0) return {0.0, std::exp(log_bound) * (1.0 + r * r)};
  double inner_err_max = 0.0;
  // Outer variable u with tau = u^2 removes the 1/sqrt(tau) singularity.
  auto outer = [&](double u) -> double {
    const double tau = u * u;
    if (tau <= 0.0) return 0.0;
    const double a = r * r / (4.0 * eps * tau);
    // The inner integrand is bounded by a(z+1) exp(-a(z+1)^2 + b sqrt z); if that
    // exponent is hopeless everywhere the contribution underflows.
    if (a > 800.0 && b * b / (16.0 * a) - a < -745.0) return 0.0;
    auto inner = [a, b](double y) -> double {
      if (y >= 1.0) return 0.0;
      const double z = y / (1.0 - y);
      const double jac = 1.0 / ((1.0 - y) * (1.0 - y));
      const double arg = b * std::sqrt(z);
      const double expo = -a * (z + 1.0) * (z + 1.0) + arg;
      if (expo < -745.0) return 0.0;
      return a * (z + 1.0) * std::exp(expo) * bessel_i0e(arg) * jac;
    };
    double err = 0.0;
    const double v = integrate_checked(inner, 0.0, 1.0, params.quad_tol * 0.1, &err, "fundamental_k inner");
    inner_err_max = std::max(inner_err_max, err);
    return pref * std::exp(-c * c * tau / eps) * v;
  };
  double err = 0.0;
  const double v = integrate_checked(outer, 0.0, std::sqrt(t), params.quad_tol, &err, "fundamental_k outer");
  return {v, err + pref * std::sqrt(t) * inner_err_max};
}

double reduce_theta_argument(double x, int* odd_sign) {
  const double yr = x - 2.0 * std::round(x / 2.0);
  if (odd_sign) *odd_sign = yr < 0 ? -1 : 1;
  return std::abs(yr);
}

KernelEval theta(double x, double t, const KernelParams& params) {
  params.validate();
  if (t < 0) throw InvalidArgument("theta: t must be nonnegative");
  if (t == 0.0) return {0.0, 0.0};
  const double y = reduce_theta_argument(x);
  if (params.backend == KernelBackend::spectral) {
    const SpectralTheta st(params.epsilon, params.c);
    return {st(y, t).v, 1e-12};
  }
  KernelEval acc = fundamental_k(y, t, params);
  for (int m = 1; m <= params.series_terms; ++m) {
    const KernelEval lo = fundamental_k(std::abs(y - 2.0 * m), t, params);
    const KernelEval hi = fundamental_k(y + 2.0 * m, t, params);
    acc.value += lo.value + hi.value;
    acc.est_error += lo.est_error + hi.est_error;
  }
  // Tail proxy: the first omitted pair of images.
  const int m = params.series_terms + 1;
  const double tail = fundamental_k(2.0 * m - y, t, params).value + fundamental_k(2.0 * m + y, t, params).value;
  acc.est_error += 2.0 * std::abs(tail);
  return acc;
}

KernelEval green_w(double x, double xi, double s, const KernelParams& params) {
  if (s < 0) throw InvalidArgument("green_w: s must be nonnegative");
  const KernelEval a = theta(x - xi, s, params);
  const KernelEval b = theta(x + xi, s, params);
  return {a.value - b.value, a.est_error + b.est_error};
}

namespace {

// Richardson extrapolation of a difference quotient.
// dir = 0: central stencils, error expansion in h^2, h^4, ...
// dir = +/-1: one-sided stencils pointing in that direction, expansion h^2, h^3, ...
KernelEval richardson(const std::function<double(double)>& F, double p, int order, double h0, int dir,
                      int levels, double rel_tol) {
  std::vector<std::vector<double>> table(levels);
  const double f0 = (dir != 0 || order == 2) ? F(p) : 0.0;
  for (int i = 0; i < levels; ++i) {
    const double h = h0 / std::pow(2.0, i);
    double d = 0.0;
    if (dir == 0) {
      if (order == 1) d = (F(p + h) - F(p - h)) / (2 * h);
      else d = (F(p + h) - 2 * f0 + F(p - h)) / (h * h);
    } else {
      const double f1 = F(p + dir * h), f2 = F(p + 2 * dir * h);
      if (order == 1) d = dir * (-3 * f0 + 4 * f1 - f2) / (2 * h);
      else d = (2 * f0 - 5 * f1 + 4 * f2 - F(p + 3 * dir * h)) / (h * h);
    }
    table[i].push_back(d);
    for (int j = 1; j <= i; ++j) {
      const int power = dir == 0 ? 2 * j : j + 1;
      const double fac = std::pow(2.0, power) - 1.0;
      table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / fac);
    }
  }
  double best = table[0][0], best_err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < levels; ++i) {
    const double e = std::abs(table[i][i] - table[i - 1][i - 1]);
    if (e < best_err) {
      best_err = e;
      best = table[i][i];
    }
  }
  if (!(best_err <= rel_tol * std::max(1.0, std::abs(best)))) {
    std::ostringstream msg;
    msg << "Richardson extrapolation stalled: error estimate " << best_err;
    throw ConvergenceFailure(msg.str());
  }
  return {best, best_err};
}

// x-derivative (order 1 or 2) of theta at (y, t), never straddling the corner at 0 mod 2.
KernelEval theta_x_derivative(double y, double t, int order, const KernelParams& params) {
  int sgn = 1;
  const double d = reduce_theta_argument(y, &sgn);
  auto F = [&](double z) { return theta(z, t, params).value; };
  const double yr = sgn * d;
  if (d >= 0.02) return richardson(F, yr, order, std::min(0.05, d / 2), 0, 5, 1e-5);
  if (order == 1 && d == 0.0) return {0.0, 0.0};  // mean of the one-sided slopes
  const int dir = yr < 0 ? -1 : 1;
  return richardson(F, yr, order, 0.02, dir, 5, 1e-5);
}

KernelEval theta_t_derivative(double y, double t, int order, const KernelParams& params) {
  auto F = [&](double s) { return theta(y, s, params).value; };
  return richardson(F, t, order, std::min(0.05, t / 2), 0, 5, 1e-5);
}

}  // namespace

KernelEval green_w_derivative(double x, double xi, double s, const KernelParams& params, WDerivative which) {
  if (!(s > 0)) throw InvalidArgument("green_w_derivative: s must be positive");
  if (params.backend == KernelBackend::spectral) {
    // The series carries exact derivatives, so no differencing is needed.
    const auto jets = SpectralTheta(params.epsilon, params.c).at_points(s, {x - xi, x + xi});
    const ThetaJet& a = jets[0];
    const ThetaJet& b = jets[1];
    const double v = which == WDerivative::t ? a.t - b.t : which == WDerivative::x ? a.x - b.x : a.xx - b.xx;
    return {v, 1e-12};
  }
  if (which == WDerivative::t) {
    auto F = [&](double tau) { return green_w(x, xi, tau, params).value; };
    return richardson(F, s, 1, std::min(0.05, s / 2), 0, 5, 1e-5);
  }
  const int order = which == WDerivative::x ? 1 : 2;
  const KernelEval a = theta_x_derivative(x - xi, s, order, params);
  const KernelEval b = theta_x_derivative(x + xi, s, order, params);
  return {a.value - b.value, a.est_error + b.est_error};
}

KernelEval theta_operator_residual(double x, double t, const KernelParams& params) {
  if (!(t > 0)) throw InvalidArgument("theta_operator_residual: t must be positive");
  const KernelEval tt = theta_t_derivative(x, t, 2, params);
  const KernelEval xx = theta_x_derivative(x, t, 2, params);
  auto G = [&](double s) { return theta_x_derivative(x, s, 2, params).value; };
  const KernelEval xxt = richardson(G, t, 1, std::min(0.05, t / 2), 0, 3, 1e-4);
  const double c2 = params.c * params.c;
  const double r = -params.epsilon * xxt.value - c2 * xx.value + tt.value;
  return {r, params.epsilon * xxt.est_error + c2 * xx.est_error + tt.est_error};
}

bool BoundReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass(); });
}

namespace {

// Composite Gauss-Legendre over [lo, hi] with `panels` panels; returns the nodes and weights.
void gl_nodes(double lo, double hi, int panels, std::vector<double>& nodes, std::vector<double>& weights) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const auto& abs = G::abscissa();
  const auto& wts = G::weights();
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (size_t i = 0; i < abs.size(); ++i) {
      nodes.push_back(mid - 0.5 * h * abs[i]);
      weights.push_back(0.5 * h * wts[i]);
      nodes.push_back(mid + 0.5 * h * abs[i]);
      weights.push_back(0.5 * h * wts[i]);
    }
  }
}

// The five xi-integrals of the bound report at one resolution.
std::array<double, 6> bound_integrals(const SpectralTheta& st, double x, double s, int panels) {
  std::vector<double> nodes, weights;
  if (x > 0) gl_nodes(0.0, x, panels, nodes, weights);
  if (x < 1) gl_nodes(x, 1.0, panels, nodes, weights);
  std::vector<double> args;
  args.reserve(2 * nodes.size());
  for (double xi : nodes) {
    args.push_back(x - xi);
    args.push_back(x + xi);
  }
  const auto jets = st.at_points(s, args);
  std::array<double, 6> acc{};  // |w|, |w_x|, |w_t|, |w_xx| regular, |w_t - w_xx| regular, signed w_xx
  for (size_t q = 0; q < nodes.size(); ++q) {
    const ThetaJet& m = jets[2 * q];
    const ThetaJet& p = jets[2 * q + 1];
    const double w = m.v - p.v, wx = m.x - p.x, wt = m.t - p.t, wxx = m.xx - p.xx;
    const double wq = weights[q];
    acc[0] += wq * std::abs(w);
    acc[1] += wq * std::abs(wx);
    acc[2] += wq * std::abs(wt);
    acc[3] += wq * std::abs(wxx);
    acc[4] += wq * std::abs(wt - wxx);
    acc[5] += wq * wxx;
  }
  return acc;
}

}  // namespace

BoundReport verify_kernel_bounds(double x, double s, const KernelParams& params) {
  params.validate();
  if (!(s > 0)) throw InvalidArgument("verify_kernel_bounds: s must be positive");
  if (x < 0 || x > 1) throw InvalidArgument("verify_kernel_bounds: x must lie in [0, 1]");
  const SpectralTheta st(params.epsilon, params.c);
  const auto coarse = bound_integrals(st, x, s, 32);
  const auto fine = bound_integrals(st, x, s, 64);

  BoundReport rep;
  rep.x = x;
  rep.s = s;
  const bool interior = x > 0 && x < 1;
  // theta_xx carries -A(s) delta at x - xi = 0, hence w_xx carries -A(s) delta(xi - x).
  rep.point_mass = interior ? st.point_strength(s) : 0.0;
  rep.wxx_regular = fine[3];
  rep.wxx_signed = std::abs(fine[5] - rep.point_mass);

  auto tol = [&](int i) { return 10.0 * std::abs(fine[i] - coarse[i]) + 1e-9; };
  const double c = params.c, eps = params.epsilon;
  rep.checks.push_back({"int|w| <= s", fine[0], s, tol(0)});
  rep.checks.push_back({"int|w_x| <= 1/c", fine[1], 1.0 / c, tol(1)});
  rep.checks.push_back({"int|w_t| <= 1", fine[2], 1.0, tol(2)});
  rep.checks.push_back({"int|w_xx| <= (1+2c^2 s)/eps", fine[3] + rep.point_mass, (1.0 + 2.0 * c * c * s) / eps,
                        tol(3)});
  rep.checks.push_back({"int|w_t - w_xx| <= 1", fine[4] + rep.point_mass, 1.0, tol(4)});
  return rep;
}

KernelTable::KernelTable(double epsilon, double c, int nx, double dt, int n_lags)
    : nx_(nx), n_off_(2 * (nx - 1) + 1), n_lags_(n_lags), dt_(dt) {
  if (nx < 3) throw InvalidArgument("KernelTable: nx must be at least 3");
  if (!(dt > 0) || n_lags < 0) throw InvalidArgument("KernelTable: need dt > 0 and n_lags >= 0");
  const SpectralTheta st(epsilon, c);
  jets_.resize(static_cast<size_t>(n_lags + 1) * n_off_);
  strength_.resize(n_lags + 1);
  strength_t_.resize(n_lags + 1);
  for (int l = 0; l <= n_lags; ++l) {
    const double s = l * dt;
    const auto row = st.on_uniform_offsets(s, nx - 1, n_off_);
    std::copy(row.begin(), row.end(), jets_.begin() + static_cast<ptrdiff_t>(l) * n_off_);
    strength_[l] = l == 0 ? 0.0 : st.point_strength(s);
    strength_t_[l] = l == 0 ? 0.0 : -(c * c / epsilon) * st.point_strength(s);
  }
}

}  // namespace dwl
