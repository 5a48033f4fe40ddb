#pragma once

#include <functional>

#include "dwl/functionals/constants.hpp"
#include "dwl/functionals/functionals.hpp"

namespace dwl {

/// nu = eps pi^2 + inf a. Throws InvalidArgument unless nu > 0.
double nu_of(double epsilon, double inf_a);

/// M = (1 + eps pi^2 + eps^3 pi^4)/nu + 1/(eps pi^2) + 1/2. Throws InvalidArgument for nu <= 0.
double M_constant(double epsilon, double nu);

/// gamma(sigma) = (A sigma^tau + A') eps + M.
/// Throws InvalidArgument for nu <= 0, tau outside [0, 2) or sigma < 0.
double gamma_schedule_thm2(double sigma, double A, double A_prime, double tau, double epsilon, double nu);

/// delta(sigma) = B^{-1}(sigma k1/c2) with k1, c2 taken from constants_fn(sigma).
double delta_schedule_thm2(double sigma, const PotentialSpec& pot,
                           const std::function<ConstantsBundle(double)>& constants_fn);

/// Everything the exponential decay claim needs, for a damping bound |a| <= A d^tau + A'.
struct Thm2Schedule {
  double epsilon = 1.0;
  double K = 1.0;  // sup F_u
  double A = 0.0, A_prime = 0.0, tau = 0.0;
  double inf_a = 0.0;
  PotentialSpec pot;

  double nu() const { return nu_of(epsilon, inf_a); }
  double gamma(double sigma) const;
  ConstantsBundle constants(double sigma) const;
  double delta(double sigma) const;
  /// C(sigma) = k3^2 / [c2^2 (1 + m(sigma))].
  double C(double sigma) const;
  /// D(sigma) = (c2/k1) sqrt(1 + m(delta(sigma))).
  double D(double sigma) const;
  /// Smallest sigma with delta(sigma) >= target, by bracketing and bisection.
  double sigma_for_delta(double target) const;
};

/// Chained constants of the variant that controls |a| through d_1.
struct Thm3Bounds {
  double alpha = 0.0;
  double beta1 = 0.0;       // 2 sqrt(2) sqrt(1 + m(alpha)) alpha
  double A_alpha = 0.0;     // A(beta1)
  double gamma_alpha = 0.0; // A(beta1) eps + M
  double beta_alpha = 0.0;  // (c2/k1) B(alpha)
  double D_alpha = 0.0;     // (c2/k1) sqrt(1 + m(beta))
  double C_alpha = 0.0;     // k3^2 / [c2^2 (1 + m(beta))]
  ConstantsBundle constants;
};

/// A_fn must be a nondecreasing bound on |a| as a function of d_1.
Thm3Bounds thm3_bounds(double alpha, const PotentialSpec& pot, double epsilon, const std::function<double(double)>& A_fn,
                       double inf_a, double K = 1.0);

/// Constants of the power-law decay claim for a potential with |int_0^phi F| <= D_pot |phi|^{tau+1}
/// and a damping bound |a| <= A.
struct Thm4Constants {
  double epsilon = 1.0, D_pot = 0.0, tau = 0.0;
  double gamma = 0.0;
  double c2_sq = 0.0, k1p_sq = 0.0, k3p_sq = 0.0;
  /// E with k3' in the numerator, as stated.
  double E = 0.0;
  /// E with k3'^2, which is what the differential inequality delivers.
  double E_derived = 0.0;
  /// Value of W where the two branches c2^2 d^2 and D (gamma+1) d^{tau+1} of the estimate trade places.
  double W_star = 0.0;

  /// G(d) = c2^2 d^2 + D_pot (gamma + 1) d^{tau + 1}.
  double G(double d) const;
  /// Inverse of G by bisection, to 1e-12 relative. Throws InvalidArgument for y < 0.
  double G_inverse(double y) const;
  /// delta(sigma) = G^{-1}(sigma^2 k1'^2).
  double delta(double sigma) const;
  /// sigma with delta(sigma) = d, i.e. sqrt(G(d)) / k1'.
  double sigma_for_delta(double d) const;
  /// 1 / (k1'^2 [E s]^{(1+tau)/(1-tau)}) for s > 0; +inf for s <= 0.
  double envelope_d_sq(double s, bool derived = false) const;
};

/// gamma = A eps + M with nu = eps pi^2 + inf a. Throws InvalidArgument unless 0 <= tau < 1 and D_pot >= 0.
Thm4Constants thm4_envelope_constants(double epsilon, double D_pot, double tau, double A, double inf_a);

}  // namespace dwl
