#include "dwl/core/problem.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "dwl/core/grid.hpp"
#include "dwl/errors.hpp"

namespace dwl {

double numeric_derivative(const Profile& p, double s, int order) {
  if (!p) return 0.0;
  const double scale = std::max(1.0, std::abs(s));
  if (order == 1) {
    const double h = 1e-3 * scale;
    return (-p(s + 2 * h) + 8 * p(s + h) - 8 * p(s - h) + p(s - 2 * h)) / (12 * h);
  }
  if (order == 2) {
    const double h = 1e-2 * scale;
    return (-p(s + 2 * h) + 16 * p(s + h) - 30 * p(s) + 16 * p(s - h) - p(s - 2 * h)) / (12 * h * h);
  }
  throw InvalidArgument("numeric_derivative: order must be 1 or 2");
}

double ProblemSpec::init_ux(double x) const { return u0_x ? u0_x(x) : numeric_derivative(u0, x, 1); }
double ProblemSpec::init_uxx(double x) const { return u0_xx ? u0_xx(x) : numeric_derivative(u0, x, 2); }
double ProblemSpec::left_t(double t) const { return h1_t ? h1_t(t) : numeric_derivative(h1, t, 1); }
double ProblemSpec::right_t(double t) const { return h2_t ? h2_t(t) : numeric_derivative(h2, t, 1); }
double ProblemSpec::left_tt(double t) const { return h1_tt ? h1_tt(t) : numeric_derivative(h1, t, 2); }
double ProblemSpec::right_tt(double t) const { return h2_tt ? h2_tt(t) : numeric_derivative(h2, t, 2); }

void ProblemSpec::validate(double tol) const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("wave speed c must be positive");
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  struct Check {
    const char* name;
    double lhs, rhs;
  };
  const Check checks[] = {
      {"h1(0) = u0(0)", left(0.0), init_u(0.0)},
      {"h2(0) = u0(1)", right(0.0), init_u(1.0)},
      {"h1'(0) = u1(0)", left_t(0.0), init_ut(0.0)},
      {"h2'(0) = u1(1)", right_t(0.0), init_ut(1.0)},
  };
  for (const auto& ck : checks) {
    if (std::abs(ck.lhs - ck.rhs) > tol) {
      std::ostringstream msg;
      msg << "compatibility condition " << ck.name << " violated: " << ck.lhs << " vs " << ck.rhs;
      throw InvalidArgument(msg.str());
    }
  }
}

namespace {

Profile compose_time(const Profile& p, double factor, double scale) {
  if (!p) return {};
  return [p, factor, scale](double s) { return scale * p(s / factor); };
}

}  // namespace

ProblemSpec rescale_unit_wavespeed(const ProblemSpec& spec) {
  if (spec.c == 1.0) return spec;
  const double c = spec.c;
  ProblemSpec out = spec;
  out.c = 1.0;
  out.epsilon = spec.epsilon / c;
  if (spec.forcing) {
    out.forcing = [f = spec.forcing, c](double x, double s, double u, double ux, double uxx, double us) {
      return f(x, s / c, u, ux, uxx, c * us) / (c * c);
    };
  }
  out.u1 = spec.u1 ? Profile([u1 = spec.u1, c](double x) { return u1(x) / c; }) : Profile{};
  out.h1 = compose_time(spec.h1, c, 1.0);
  out.h2 = compose_time(spec.h2, c, 1.0);
  // Derivatives in the new time pick up factors 1/c and 1/c^2.
  out.h1_t = spec.h1 ? Profile([s0 = spec, c](double s) { return s0.left_t(s / c) / c; }) : Profile{};
  out.h2_t = spec.h2 ? Profile([s0 = spec, c](double s) { return s0.right_t(s / c) / c; }) : Profile{};
  out.h1_tt = spec.h1 ? Profile([s0 = spec, c](double s) { return s0.left_tt(s / c) / (c * c); }) : Profile{};
  out.h2_tt = spec.h2 ? Profile([s0 = spec, c](double s) { return s0.right_tt(s / c) / (c * c); }) : Profile{};
  out.horizon = spec.horizon * c;
  out.transform.time_scale = spec.transform.time_scale * c;
  if (spec.transform.homogenized) {
    out.transform.lift_h1 = compose_time(spec.transform.lift_h1, c, 1.0);
    out.transform.lift_h2 = compose_time(spec.transform.lift_h2, c, 1.0);
    out.transform.lift_h1_t = compose_time(spec.transform.lift_h1_t, c, 1.0 / c);
    out.transform.lift_h2_t = compose_time(spec.transform.lift_h2_t, c, 1.0 / c);
  }
  return out;
}

ProblemSpec homogenize_boundaries(const ProblemSpec& spec) {
  if (spec.c != 1.0) throw InvalidArgument("homogenize_boundaries requires c = 1; rescale first");
  if (spec.zero_boundaries()) return spec;
  if (spec.transform.homogenized) throw InvalidArgument("problem already carries a boundary lift");

  // Snapshot the original data; the new callables must not alias `out`.
  const ProblemSpec src = spec;
  auto p = [src](double x, double t) { return (1 - x) * src.left(t) + x * src.right(t); };
  auto p_t = [src](double x, double t) { return (1 - x) * src.left_t(t) + x * src.right_t(t); };
  auto p_tt = [src](double x, double t) { return (1 - x) * src.left_tt(t) + x * src.right_tt(t); };
  auto p_x = [src](double t) { return src.right(t) - src.left(t); };

  ProblemSpec out = spec;
  out.forcing = [src, p, p_t, p_tt, p_x](double x, double t, double v, double vx, double vxx, double vt) {
    return src.f(x, t, v + p(x, t), vx + p_x(t), vxx, vt + p_t(x, t)) - p_tt(x, t);
  };
  out.u0 = [src, p](double x) { return src.init_u(x) - p(x, 0.0); };
  out.u1 = [src, p_t](double x) { return src.init_ut(x) - p_t(x, 0.0); };
  out.u0_x = [src, p_x](double x) { return src.init_ux(x) - p_x(0.0); };
  out.u0_xx = [src](double x) { return src.init_uxx(x); };
  out.h1 = out.h2 = out.h1_t = out.h2_t = out.h1_tt = out.h2_tt = Profile{};
  out.transform.homogenized = true;
  out.transform.lift_h1 = [src](double t) { return src.left(t); };
  out.transform.lift_h2 = [src](double t) { return src.right(t); };
  out.transform.lift_h1_t = [src](double t) { return src.left_t(t); };
  out.transform.lift_h2_t = [src](double t) { return src.right_t(t); };
  return out;
}

ProblemSpec reduce_to_normal_form(const ProblemSpec& spec) {
  return homogenize_boundaries(rescale_unit_wavespeed(spec));
}

double pde_residual(const ProblemSpec& spec, const GridFunction& g) {
  if (!g.has_ut()) throw InvalidArgument("pde_residual needs u_t samples");
  if (g.nt < 3 || g.nx < 3) throw InvalidArgument("pde_residual needs at least 3x3 samples");
  const double dx = g.dx();
  const double c2 = spec.c * spec.c;
  double worst = 0.0;
  for (int k = 1; k + 1 < g.nt; ++k) {
    const double t = g.t(k);
    auto u = g.row(g.u, k);
    auto ut = g.row(g.ut, k);
    auto utp = g.row(g.ut, k + 1);
    auto utm = g.row(g.ut, k - 1);
    const auto ux = diff1(u, dx);
    for (int i = 1; i + 1 < g.nx; ++i) {
      const double uxx = (u[i + 1] - 2 * u[i] + u[i - 1]) / (dx * dx);
      const double uxxt = (ut[i + 1] - 2 * ut[i] + ut[i - 1]) / (dx * dx);
      const double utt = (utp[i] - utm[i]) / (2 * g.dt);
      const double r = -spec.epsilon * uxxt - c2 * uxx + utt - spec.f(g.x(i), t, u[i], ux[i], uxx, ut[i]);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

ProblemSpec perturbation_spec(const ProblemSpec& spec, const GridFunction& u_star, double residual_tol) {
  if (!u_star.has_ut()) throw InvalidArgument("perturbation_spec: u_star must carry u_t samples");
  const double res = pde_residual(spec, u_star);
  if (!(res <= residual_tol)) {
    std::ostringstream msg;
    msg << "perturbation_spec: u_star is not a solution (residual " << res << " > " << residual_tol << ")";
    throw InvalidArgument(msg.str());
  }
  GridFunction star = u_star;
  if (!star.has_space_derivatives()) star.fill_space_derivatives();
  auto shared = std::make_shared<const GridFunction>(std::move(star));
  const ProblemSpec src = spec;

  ProblemSpec out = spec;
  out.forcing = [src, shared](double x, double t, double u, double ux, double uxx, double ut) {
    const GridFunction& s = *shared;
    const double a = s.interpolate(s.u, x, t);
    const double ax = s.interpolate(s.ux, x, t);
    const double axx = s.interpolate(s.uxx, x, t);
    const double at = s.interpolate(s.ut, x, t);
    return src.f(x, t, u + a, ux + ax, uxx + axx, ut + at) - src.f(x, t, a, ax, axx, at);
  };
  const double t0 = shared->t0;
  out.u0 = [src, shared, t0](double x) { return src.init_u(x) - shared->interpolate(shared->u, x, t0); };
  out.u1 = [src, shared, t0](double x) { return src.init_ut(x) - shared->interpolate(shared->ut, x, t0); };
  out.u0_x = out.u0_xx = Profile{};
  out.h1 = out.h2 = out.h1_t = out.h2_t = out.h1_tt = out.h2_tt = Profile{};
  out.horizon = std::min(spec.horizon, shared->t_end());
  return out;
}

GridFunction restore_original(const ProblemSpec& reduced, const GridFunction& v) {
  GridFunction g = v;
  const Transform& tr = reduced.transform;
  if (tr.homogenized) {
    for (int k = 0; k < g.nt; ++k) {
      const double t = g.t(k);
      const double a = eval(tr.lift_h1, t), b = eval(tr.lift_h2, t);
      const double at = eval(tr.lift_h1_t, t), bt = eval(tr.lift_h2_t, t);
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        g.at(k, i) += (1 - x) * a + x * b;
        if (g.has_ut()) g.ut[static_cast<size_t>(k) * g.nx + i] += (1 - x) * at + x * bt;
        if (!g.ux.empty()) g.ux[static_cast<size_t>(k) * g.nx + i] += b - a;
      }
    }
  }
  const double s = tr.time_scale;
  if (s != 1.0) {
    g.dt = v.dt / s;
    g.t0 = v.t0 / s;
    for (double& w : g.ut) w *= s;
  }
  return g;
}

}  // namespace dwl
