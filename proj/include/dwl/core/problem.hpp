#pragma once

#include <functional>
#include <limits>

namespace dwl {

struct GridFunction;

/// Right-hand side f(x, t, u, u_x, u_xx, u_t) of  -eps u_xxt - c^2 u_xx + u_tt = f.
using Forcing = std::function<double(double x, double t, double u, double ux, double uxx, double ut)>;

/// A scalar function of one variable. An empty Profile stands for the zero function.
using Profile = std::function<double(double)>;

/// Evaluate a profile, treating an empty one as zero.
inline double eval(const Profile& p, double s) { return p ? p(s) : 0.0; }

/// Derivative of order 1 or 2 by a fourth-order central difference.
/// The callable must accept arguments slightly outside its nominal domain.
double numeric_derivative(const Profile& p, double s, int order);

/// Record of the reductions applied to a problem so that results can be mapped back.
struct Transform {
  /// t_current = time_scale * t_original.
  double time_scale = 1.0;
  /// True once the boundary lift p(x,t) = (1-x) h1(t) + x h2(t) has been subtracted.
  bool homogenized = false;
  /// Boundary data of the lifted problem, expressed in current time.
  Profile lift_h1, lift_h2, lift_h1_t, lift_h2_t;
};

/// A concrete instance of the Dirichlet problem on (0,1).
///
/// Empty callables mean zero. Optional derivative callables (u0_x, u0_xx,
/// h*_t, h*_tt) are replaced by finite differences when absent.
struct ProblemSpec {
  double epsilon = 1.0;
  double c = 1.0;
  Forcing forcing;
  Profile u0, u1;
  Profile u0_x, u0_xx;
  Profile h1, h2;
  Profile h1_t, h2_t, h1_tt, h2_tt;
  double horizon = std::numeric_limits<double>::infinity();
  Transform transform;

  /// Throws InvalidArgument when eps or c is not positive or the
  /// compatibility conditions between initial and boundary data fail.
  void validate(double tol = 1e-9) const;

  double f(double x, double t, double u, double ux, double uxx, double ut) const {
    return forcing ? forcing(x, t, u, ux, uxx, ut) : 0.0;
  }
  double init_u(double x) const { return eval(u0, x); }
  double init_ut(double x) const { return eval(u1, x); }
  double init_ux(double x) const;
  double init_uxx(double x) const;

  double left(double t) const { return eval(h1, t); }
  double right(double t) const { return eval(h2, t); }
  double left_t(double t) const;
  double right_t(double t) const;
  double left_tt(double t) const;
  double right_tt(double t) const;

  /// True when both boundary profiles are absent (identically zero).
  bool zero_boundaries() const { return !h1 && !h2; }
};

/// Factor the wave speed out: returns an equivalent problem with c = 1.
/// With s = c t the new data are eps' = eps / c, f' = f / c^2 (with u_t = c U_s),
/// U_s(x,0) = u1 / c and H(s) = h(s / c).
ProblemSpec rescale_unit_wavespeed(const ProblemSpec& spec);

/// Subtract the linear boundary lift. Requires c = 1.
ProblemSpec homogenize_boundaries(const ProblemSpec& spec);

/// Rescale then homogenize; the result has c = 1 and zero boundary data.
ProblemSpec reduce_to_normal_form(const ProblemSpec& spec);

/// Problem for the difference u - u*, where u_star is a sampled solution of spec.
/// The returned forcing vanishes identically at the zero state.
/// Throws InvalidArgument if u_star fails the discrete residual check.
ProblemSpec perturbation_spec(const ProblemSpec& spec, const GridFunction& u_star,
                              double residual_tol = 1e-2);

/// Largest discrete residual of L u - f over interior grid points.
double pde_residual(const ProblemSpec& spec, const GridFunction& g);

/// Undo the recorded transforms on a grid computed for a reduced problem.
/// Adds back the lift and converts the time axis and u_t to original units.
GridFunction restore_original(const ProblemSpec& reduced, const GridFunction& v);

}  // namespace dwl
