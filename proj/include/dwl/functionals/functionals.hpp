#pragma once

#include <functional>
#include <span>

#include "dwl/core/grid.hpp"

namespace dwl {

/// Nonlinearity F(u) of the autonomous part of the forcing, f = F(u) - a u_t.
/// F_prime and antiderivative are optional; finite differences and adaptive
/// quadrature take over when they are missing.
struct PotentialSpec {
  std::function<double(double)> F;
  std::function<double(double)> F_prime;
  std::function<double(double)> antiderivative;  // int_0^phi F(z) dz

  double value(double u) const { return F ? F(u) : 0.0; }
  double derivative(double u) const;
  double primitive(double phi) const;

  /// Throws InvalidArgument unless F(0) = 0 to 1e-12.
  void validate() const;

  static PotentialSpec zero();
  /// F = -sin u.
  static PotentialSpec sine_gordon();
  /// F = -k u.
  static PotentialSpec linear(double k);
  /// F = -kappa sgn(u) |u|^tau.
  static PotentialSpec power(double kappa, double tau);
};

/// d^2 = int (phi^2 + phi_x^2 + phi_xx^2 + psi^2); returns d.
double distance_d(const StatePair& s);
/// d_1^2 = int (phi^2 + phi_x^2 + psi^2); returns d_1.
double distance_d1(const StatePair& s);

/// V = 1/2 int [(eps phi_xx - psi)^2 + gamma psi^2 + (1 + gamma) phi_x^2].
double lyapunov_V(const StatePair& s, double gamma, double epsilon);
/// W_gamma = V - (1 + gamma) int int_0^phi F.
double lyapunov_W(const StatePair& s, double gamma, double epsilon, const PotentialSpec& pot);
/// v = 1/2 int [psi^2 + phi_x^2 - 2 int_0^phi F].
double hamiltonian_v(const StatePair& s, const PotentialSpec& pot);

/// int_0^1 int_0^phi(x) F(z) dz dx.
double potential_integral(const StatePair& s, const PotentialSpec& pot);
/// int_0^1 F(phi) phi_xx dx.
double potential_curvature_integral(const StatePair& s, const PotentialSpec& pot);

/// Rate of change of W_gamma along a solution of  L u = F(u) - a u_t  with c = 1:
///   -int [eps u_xx^2 + eps gamma u_xt^2 + a (1+gamma) u_t^2 + eps F(u) u_xx - eps a u_xx u_t].
/// `a` holds the damping coefficient at the state's grid points; u_xt comes from psi by stencils.
double w_dot_identity(const StatePair& s, double gamma, double epsilon, const PotentialSpec& pot,
                      std::span<const double> a);

struct PoincareRatios {
  double ratio1 = 0.0;  // int phi_x^2 / int phi^2
  double ratio2 = 0.0;  // int phi_xx^2 / int phi_x^2
  bool degenerate = false;
};

/// Both ratios should be at least pi^2 for phi in C_0^2.
PoincareRatios poincare_check(const StatePair& s);

/// m(r) = max |F'| on [-r, r], sampled at 2048 points per unit with 4x refinement
/// around the largest samples, then inflated by 0.1 %.
double m_of(const PotentialSpec& pot, double r);
/// B(d) = sqrt(1 + m(d)) d.
double B_of(const PotentialSpec& pot, double d);
/// Inverse of B by bisection. Throws InvalidArgument if y is negative or not attained.
double B_inverse(const PotentialSpec& pot, double y);

}  // namespace dwl
