#include "dwl/scenarios/schedules.hpp"

#include <cmath>
#include <limits>

#include "dwl/errors.hpp"

namespace dwl {

namespace {
constexpr double kPi2 = M_PI * M_PI;
}

double nu_of(double epsilon, double inf_a) {
  const double nu = epsilon * kPi2 + inf_a;
  if (!(epsilon > 0)) throw InvalidArgument("nu_of: epsilon must be positive");
  if (!(nu > 0)) throw InvalidArgument("nu_of: inf a must exceed -eps pi^2");
  return nu;
}

double M_constant(double epsilon, double nu) {
  if (!(nu > 0)) throw InvalidArgument("M_constant: nu must be positive");
  if (!(epsilon > 0)) throw InvalidArgument("M_constant: epsilon must be positive");
  return (1.0 + epsilon * kPi2 + std::pow(epsilon, 3) * kPi2 * kPi2) / nu + 1.0 / (epsilon * kPi2) + 0.5;
}

double gamma_schedule_thm2(double sigma, double A, double A_prime, double tau, double epsilon, double nu) {
  if (!(tau >= 0 && tau < 2)) throw InvalidArgument("gamma_schedule_thm2: tau must lie in [0, 2)");
  if (!(sigma >= 0)) throw InvalidArgument("gamma_schedule_thm2: sigma must be nonnegative");
  const double s_tau = tau == 0 ? 1.0 : std::pow(sigma, tau);
  return (A * s_tau + A_prime) * epsilon + M_constant(epsilon, nu);
}

double delta_schedule_thm2(double sigma, const PotentialSpec& pot,
                           const std::function<ConstantsBundle(double)>& constants_fn) {
  const ConstantsBundle k = constants_fn(sigma);
  return B_inverse(pot, sigma * std::sqrt(k.k1_sq / k.c2_sq));
}

double Thm2Schedule::gamma(double sigma) const { return gamma_schedule_thm2(sigma, A, A_prime, tau, epsilon, nu()); }

ConstantsBundle Thm2Schedule::constants(double sigma) const { return compute_constants(epsilon, gamma(sigma), K); }

double Thm2Schedule::delta(double sigma) const {
  return delta_schedule_thm2(sigma, pot, [this](double s) { return constants(s); });
}

double Thm2Schedule::C(double sigma) const {
  const ConstantsBundle k = constants(sigma);
  return k.k3_sq / (k.c2_sq * (1.0 + m_of(pot, sigma)));
}

double Thm2Schedule::D(double sigma) const {
  const ConstantsBundle k = constants(sigma);
  return std::sqrt(k.c2_sq / k.k1_sq) * std::sqrt(1.0 + m_of(pot, delta(sigma)));
}

double Thm2Schedule::sigma_for_delta(double target) const {
  if (!(target > 0)) throw InvalidArgument("sigma_for_delta: target must be positive");
  double lo = 0.0, hi = target;
  while (delta(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw InvalidArgument("sigma_for_delta: delta does not reach the target");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (delta(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

Thm3Bounds thm3_bounds(double alpha, const PotentialSpec& pot, double epsilon, const std::function<double(double)>& A_fn,
                       double inf_a, double K) {
  if (!(alpha > 0)) throw InvalidArgument("thm3_bounds: alpha must be positive");
  if (!A_fn) throw InvalidArgument("thm3_bounds: a bound on |a| is required");
  Thm3Bounds b;
  b.alpha = alpha;
  b.beta1 = 2.0 * std::sqrt(2.0) * std::sqrt(1.0 + m_of(pot, alpha)) * alpha;
  b.A_alpha = A_fn(b.beta1);
  b.gamma_alpha = b.A_alpha * epsilon + M_constant(epsilon, nu_of(epsilon, inf_a));
  b.constants = compute_constants(epsilon, b.gamma_alpha, K);
  const double ratio = std::sqrt(b.constants.c2_sq / b.constants.k1_sq);
  b.beta_alpha = ratio * B_of(pot, alpha);
  const double m_beta = m_of(pot, b.beta_alpha);
  b.D_alpha = ratio * std::sqrt(1.0 + m_beta);
  b.C_alpha = b.constants.k3_sq / (b.constants.c2_sq * (1.0 + m_beta));
  return b;
}

double Thm4Constants::G(double d) const { return c2_sq * d * d + D_pot * (gamma + 1.0) * std::pow(d, tau + 1.0); }

double Thm4Constants::G_inverse(double y) const {
  if (!(y >= 0)) throw InvalidArgument("G_inverse: argument must be nonnegative");
  if (y == 0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (G(hi) < y) hi *= 2.0;
  for (int it = 0; it < 300 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (G(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double Thm4Constants::delta(double sigma) const { return G_inverse(sigma * sigma * k1p_sq); }

double Thm4Constants::sigma_for_delta(double d) const { return std::sqrt(G(d) / k1p_sq); }

double Thm4Constants::envelope_d_sq(double s, bool derived) const {
  if (!(s > 0)) return std::numeric_limits<double>::infinity();
  const double e = derived ? E_derived : E;
  return 1.0 / (k1p_sq * std::pow(e * s, (1.0 + tau) / (1.0 - tau)));
}

Thm4Constants thm4_envelope_constants(double epsilon, double D_pot, double tau, double A, double inf_a) {
  if (!(tau >= 0 && tau < 1)) throw InvalidArgument("thm4_envelope_constants: tau must lie in [0, 1)");
  if (!(D_pot >= 0)) throw InvalidArgument("thm4_envelope_constants: D must be nonnegative");
  Thm4Constants k;
  k.epsilon = epsilon;
  k.D_pot = D_pot;
  k.tau = tau;
  k.gamma = A * epsilon + M_constant(epsilon, nu_of(epsilon, inf_a));
  k.c2_sq = c2_sq_of(epsilon, k.gamma);
  k.k1p_sq = k1p_sq_of(epsilon, k.gamma);
  k.k3p_sq = k3p_sq_of(epsilon);
  const double base = std::pow(2.0 * D_pot * (k.gamma + 1.0), 2.0 / (tau + 1.0));
  const double shape = (1.0 - tau) / (1.0 + tau);
  k.E = D_pot > 0 ? std::sqrt(k.k3p_sq) / base * shape : std::numeric_limits<double>::infinity();
  k.E_derived = D_pot > 0 ? k.k3p_sq / base * shape : std::numeric_limits<double>::infinity();
  // W/(2 c2^2) = (W / (2 D (gamma+1)))^{2/(tau+1)}  solved for W.
  k.W_star = D_pot > 0 ? std::pow(base / (2.0 * k.c2_sq), (1.0 + tau) / (1.0 - tau)) : 0.0;
  return k;
}

}  // namespace dwl
