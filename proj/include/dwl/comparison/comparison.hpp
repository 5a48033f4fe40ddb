#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "dwl/comparison/ode.hpp"
#include "dwl/functionals/constants.hpp"

namespace dwl {

/// Bounds on the forcing energy:  A int f^2 <= g(t) c1^2 d^2 + g1~(t, d^2) + g2~(t, d^2).
///
/// g1 and g2 are stored already in the units of V, i.e. g_i(t, eta) = g_i~(t, eta / c1^2).
/// Empty callables mean zero. `cumulative`, when present, is the exact primitive
/// int_0^t g and replaces quadrature everywhere.
struct AveragedHypotheses {
  std::function<double(double)> g;
  std::function<double(double, double)> g1, g2;
  std::function<double(double)> cumulative;
  double sigma = 0.0;
  double chi = 1.0, kappa = 1.0;
  double q = 0.0;
  double M = 1.0;
  double xi = 0.0;
  double p = 0.0;
  /// Kinks of g; the integrator and the scans stop at each of them.
  std::vector<double> breakpoints;
  /// Replace g_i(t, eta) by its running maximum over [0, eta] (sampled at 64 points).
  bool monotonize = false;

  /// Throws InvalidArgument on out-of-range constants, chi = 1 with q >= p,
  /// or a nonzero xi while chi <= kappa.
  void validate() const;

  double g_at(double t) const { return g ? g(t) : 0.0; }
  double g1_at(double t, double eta) const;
  double g2_at(double t, double eta) const;
  bool g1_zero() const { return !g1; }
  bool g2_zero() const { return !g2; }

  /// int_0^t g, closed form when available, otherwise adaptive quadrature split at breakpoints.
  double integral(double t) const;
};

/// Sample times used by the hypothesis scans: a uniform grid with the given step plus
/// every breakpoint inside [0, horizon].
std::vector<double> scan_times(const AveragedHypotheses& hyp, double horizon, double step);

struct AveragedCheck {
  /// sup over sampled t >= t0 of  int_{t0}^t g - p (t - t0).
  double sigma_est = 0.0;
  double sigma_declared = 0.0;
  bool pass = false;
};

/// Check the averaged bound on [0, horizon] over every sampled pair t0 <= t.
AveragedCheck verify_hyp_averaged(const AveragedHypotheses& hyp, double horizon, double step = 0.01);

struct GrowthCheck {
  /// max over sampled t of |int_0^t g / (1 + t^chi) - q| - M / (1 + t^kappa); negative means pass.
  double max_violation = -std::numeric_limits<double>::infinity();
  double at_time = 0.0;
  /// Largest ratio of the left side to the right side.
  double max_ratio = 0.0;
  bool pass = false;
};

GrowthCheck verify_hyp_growth(const AveragedHypotheses& hyp, double horizon, double step = 0.01);

/// Constants of the boundedness and attraction lemmas.
struct LemmaConstants {
  double m = 0.0;
  double theta_v = 0.0;
  double t_theta = 0.0;
  double t_tilde = 0.0;
  double alpha_tilde = 0.0;
  double beta_tilde = 0.0;
  double s1 = 0.0, s2 = 0.0;
  double s_tilde = 0.0;
  /// Filled by lemma2_attraction_time.
  double T_hat = std::numeric_limits<double>::quiet_NaN();
};

/// m, theta, t_theta, t~ and beta~ from their closed forms; s1, s2 located by a forward
/// scan with step 0.1 on [0, scan_horizon] and bisection. Throws InvalidArgument for
/// chi = 1 with q >= p.
LemmaConstants lemma1_constants(const AveragedHypotheses& hyp, double alpha_tilde, double scan_horizon = 200.0);

/// h(tau) = p tau - q tau^chi - M theta (tau^chi - tau^kappa) and its derivative.
double h_function(const AveragedHypotheses& hyp, double theta_v, double tau);
double h_derivative(const AveragedHypotheses& hyp, double theta_v, double tau);

enum class ComparisonVariant { state_dependent, frozen };

/// y' = -p y + g y + g1(t, y) + g2(t, y), or with the second arguments frozen at beta.
Trajectory solve_comparison_ode(const AveragedHypotheses& hyp, double y0, double t0, double horizon,
                                ComparisonVariant variant, double beta = 0.0, OdeOptions opts = {});

struct AttractionResult {
  /// Time after t0 beyond which every trajectory of the fan stays below rho~.
  double T_hat_empirical = 0.0;
  /// Explicit bound max{T0, T2, T4} where it is available (g1 = g2 = 0 and theta = 0), else NaN.
  double T_hat_formula = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> z0;
  std::vector<double> settle_times;
};

/// Integrate the frozen equation from z0 in an evenly spaced fan over [0, alpha~] and
/// report the attraction time. Throws NotAttained if some trajectory is still at or
/// above rho~ when t0 + horizon is reached.
AttractionResult lemma2_attraction_time(const AveragedHypotheses& hyp, double rho_tilde, double alpha_tilde,
                                        double beta_tilde, double t0, double horizon, int fan = 11);

struct Theorem1Bounds {
  double beta_alpha = 0.0;  // radius that d(t) never reaches
  double s_alpha = 0.0;     // earliest admissible starting time
  LemmaConstants lemma;
};

/// alpha~ = alpha^2 c2^2, beta(alpha) = sqrt(beta~(alpha~) / c1^2), s(alpha) = s~(alpha~).
Theorem1Bounds theorem1_wiring(double alpha, const ConstantsBundle& constants, const AveragedHypotheses& hyp,
                               double scan_horizon = 200.0);

}  // namespace dwl
