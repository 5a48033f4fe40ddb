#pragma once

#include <vector>

namespace dwl {

/// theta and its derivatives at one point.
///
/// theta has a corner at x = 0 (mod 2): its x-derivative jumps by -A(t) there, with
/// A(t) = exp(-c^2 t / eps) / eps. The xx fields hold the regular part only; the full
/// second derivative is xx - A(t) * (periodic Dirac comb). delta_xx and delta_xxt are
/// the coefficients of that comb in theta_xx and theta_xxt.
struct ThetaJet {
  double v = 0, t = 0, tt = 0;
  double x = 0, xt = 0;
  double xx = 0, xxt = 0;
  double delta_xx = 0, delta_xxt = 0;
};

/// Cosine-series evaluation of theta:
///   theta(x,t) = t/2 + sum_{n>=1} Khat_n(t) cos(n pi x),
/// where Khat_n solves Khat'' + eps k^2 Khat' + c^2 k^2 Khat = 0, Khat(0)=0, Khat'(0)=1,
/// with k = n pi. The slowly decaying 1/k^2 and 1/k^4 parts of every coefficient are
/// summed in closed form, so the truncated remainder converges fast for all derivatives.
class SpectralTheta {
 public:
  SpectralTheta(double epsilon, double c);

  double epsilon() const { return eps_; }
  double c() const { return c_; }

  /// Number of modes used at time t.
  int terms(double t) const;

  /// All derivatives at (x, t). At t = 0 every field is zero.
  ThetaJet operator()(double x, double t) const;

  /// Jets at x = o * dy for o = 0..count-1, sharing the per-mode work.
  /// dy must divide 2 exactly, i.e. dy = 1/m for an integer m.
  std::vector<ThetaJet> on_uniform_offsets(double t, int m, int count) const;

  /// Jets at arbitrary points xs, all at the same time t.
  std::vector<ThetaJet> at_points(double t, const std::vector<double>& xs) const;

  /// A(t) = exp(-c^2 t / eps) / eps.
  double point_strength(double t) const;

 private:
  struct Modes;
  Modes modes(double t) const;
  static ThetaJet sum_at(const Modes& md, double x);
  static ThetaJet finish(const Modes& md, double y, int sign, const double* sums);

  double eps_, c_;
};

}  // namespace dwl
