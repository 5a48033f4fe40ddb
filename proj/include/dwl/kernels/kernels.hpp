#pragma once

#include <string>
#include <vector>

#include "dwl/kernels/spectral_theta.hpp"

namespace dwl {

/// How theta is evaluated.
///   quadrature: image sum of K, each K from the nested double integral.
///   spectral:   cosine series of the periodic kernel with analytic time/space derivatives.
/// Both describe the same function; the spectral route is orders of magnitude faster
/// and is what the Picard solver and the bound checks use.
enum class KernelBackend { quadrature, spectral };

struct KernelParams {
  double epsilon = 1.0;
  double c = 1.0;
  int series_terms = 8;    // images m = -series_terms..series_terms
  double quad_tol = 1e-10; // relative tolerance of the adaptive quadratures
  KernelBackend backend = KernelBackend::quadrature;

  void validate() const;
};

struct KernelEval {
  double value = 0.0;
  double est_error = 0.0;
};

/// Fundamental solution K(|x|, t) as a nested adaptive quadrature.
/// Throws ConvergenceFailure if either level misses its tolerance.
KernelEval fundamental_k(double x_abs, double t, const KernelParams& params);

/// Even, 2-periodic kernel theta(x, t). The argument is reduced to [0, 1] first.
KernelEval theta(double x, double t, const KernelParams& params);

/// Reduce x to [0, 1] using evenness and 2-periodicity; `odd_sign` receives the
/// sign that an odd x-derivative picks up.
double reduce_theta_argument(double x, int* odd_sign = nullptr);

/// Green's function w(x, xi, s) = theta(x - xi, s) - theta(x + xi, s).
KernelEval green_w(double x, double xi, double s, const KernelParams& params);

enum class WDerivative { t, x, xx };

/// Derivative of w: exact series derivatives for the spectral backend, Richardson-extrapolated
/// differences of theta for the quadrature backend.
/// For the xx derivative the value is the regular part: theta has a corner at
/// x = 0 (mod 2), and the stencils never straddle it.
/// Throws ConvergenceFailure when the extrapolation stalls.
KernelEval green_w_derivative(double x, double xi, double s, const KernelParams& params,
                              WDerivative which);

/// One line of a kernel bound report.
struct BoundCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= bound + tolerance; }
  double margin() const { return bound - value; }
};

struct BoundReport {
  double x = 0.0, s = 0.0;
  std::vector<BoundCheck> checks;
  /// |int w_xx dxi| including the point mass; this signed integral is what the
  /// classical argument actually controls.
  double wxx_signed = 0.0;
  /// int |w_xx| over the regular part only (point mass excluded).
  double wxx_regular = 0.0;
  /// Mass of the point part of w_xx at xi = x (zero when x is on the boundary).
  double point_mass = 0.0;
  bool all_pass() const;
};

/// Integrate |w|, |w_x|, |w_t|, |w_xx| and |w_t - w_xx| over xi in [0, 1] and compare
/// with s, 1/c, 1, (1 + 2 c^2 s)/eps and 1. Integrals of second x-derivatives count the
/// point mass of w_xx at xi = x. Tolerance is ten times the quadrature error estimate.
BoundReport verify_kernel_bounds(double x, double s, const KernelParams& params);

/// Residual -eps theta_xxt - c^2 theta_xx + theta_tt at (x, t), with every derivative
/// obtained by finite differences of the configured backend.
KernelEval theta_operator_residual(double x, double t, const KernelParams& params);

/// Tabulated kernel samples used by the Picard solver.
/// Offsets y_o = o dx for o = 0..2(nx-1) and lags s_l = l dt for l = 0..n_lags.
class KernelTable {
 public:
  KernelTable(double epsilon, double c, int nx, double dt, int n_lags);

  int nx() const { return nx_; }
  int offsets() const { return n_off_; }
  int lags() const { return n_lags_; }
  double dt() const { return dt_; }

  /// Sample (lag l, offset o).
  const ThetaJet& at(int lag, int offset) const { return jets_[static_cast<size_t>(lag) * n_off_ + offset]; }
  /// Strength A(s_l) of the point part -A delta of theta_xx.
  double point_strength(int lag) const { return strength_[lag]; }
  /// Time derivative of the strength.
  double point_strength_t(int lag) const { return strength_t_[lag]; }

 private:
  int nx_, n_off_, n_lags_;
  double dt_;
  std::vector<ThetaJet> jets_;
  std::vector<double> strength_, strength_t_;
};

}  // namespace dwl
