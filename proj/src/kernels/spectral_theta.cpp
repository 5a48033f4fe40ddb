#include "dwl/kernels/spectral_theta.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "dwl/errors.hpp"

namespace dwl {

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic sums over n >= 1 with k = n pi, valid for y in [0, 2]:
//   C2(y) = sum cos(k y) / k^2,  C4(y) = sum cos(k y) / k^4.
double c2(double y) { return 1.0 / 6.0 - y / 2.0 + y * y / 4.0; }
double c2_prime(double y) { return y == 0.0 ? 0.0 : -0.5 + y / 2.0; }
double c4(double y) { return 1.0 / 90.0 - y * y / 12.0 + y * y * y / 12.0 - y * y * y * y / 48.0; }
double c4_prime(double y) { return -y / 6.0 + y * y / 4.0 - y * y * y / 12.0; }

}  // namespace

struct SpectralTheta::Modes {
  double t = 0;
  // Closed-form parts: value (j = 0,1,2 time derivatives) of the 1/k^2 and 1/k^4 terms.
  double a[3] = {0, 0, 0};
  double b[3] = {0, 0, 0};
  // Remainders Khat^{(j)} - a_j/k^2 - b_j/k^4 for each mode.
  std::vector<double> k, r0, r1, r2;
};

SpectralTheta::SpectralTheta(double epsilon, double c) : eps_(epsilon), c_(c) {
  if (!(epsilon > 0) || !(c > 0)) throw InvalidArgument("SpectralTheta: epsilon and c must be positive");
}

double SpectralTheta::point_strength(double t) const { return std::exp(-c_ * c_ * t / eps_) / eps_; }

int SpectralTheta::terms(double t) const {
  if (t <= 0) return 0;
  // The fast branch decays like exp(-eps k^2 t); keep modes until that is below e^-50.
  const double fast = std::sqrt(50.0 / (eps_ * t)) / kPi + 2.0;
  const double n = std::max(400.0, std::ceil(fast));
  return static_cast<int>(std::min(n, 400000.0));
}

SpectralTheta::Modes SpectralTheta::modes(double t) const {
  Modes md;
  md.t = t;
  const double beta = c_ * c_ / eps_;
  const double e = std::exp(-beta * t);
  const double a0 = e / eps_;
  const double b0 = 2.0 * c_ * c_ / (eps_ * eps_ * eps_);
  const double b1 = std::pow(c_, 4) / std::pow(eps_, 4);
  const double p = b0 - b1 * t;
  md.a[0] = a0;
  md.a[1] = -beta * a0;
  md.a[2] = beta * beta * a0;
  md.b[0] = e * p;
  md.b[1] = e * (-beta * p - b1);
  md.b[2] = e * (beta * beta * p + 2.0 * beta * b1);

  const int n_terms = terms(t);
  md.k.resize(n_terms);
  md.r0.resize(n_terms);
  md.r1.resize(n_terms);
  md.r2.resize(n_terms);
  using cd = std::complex<double>;
  for (int n = 1; n <= n_terms; ++n) {
    const double k = n * kPi;
    const double k2 = k * k;
    const cd disc = std::sqrt(cd(eps_ * eps_ * k2 * k2 - 4.0 * c_ * c_ * k2, 0.0));
    // Stable pair: the large root directly, the small one from the product c^2 k^2.
    const cd rm = (-eps_ * k2 - disc) / 2.0;
    const cd rp = c_ * c_ * k2 / rm;
    double kh[3];
    const cd gap = rp - rm;
    if (std::abs(gap) < 1e-8 * std::abs(rm)) {
      const double r = -eps_ * k2 / 2.0;
      const double er = std::exp(r * t);
      kh[0] = t * er;
      kh[1] = (r * t + 1.0) * er;
      kh[2] = (r * r * t + 2.0 * r) * er;
    } else {
      const cd ep = std::exp(rp * t), em = std::exp(rm * t);
      kh[0] = ((ep - em) / gap).real();
      kh[1] = ((rp * ep - rm * em) / gap).real();
      kh[2] = ((rp * rp * ep - rm * rm * em) / gap).real();
    }
    const double inv2 = 1.0 / k2, inv4 = inv2 * inv2;
    md.k[n - 1] = k;
    md.r0[n - 1] = kh[0] - md.a[0] * inv2 - md.b[0] * inv4;
    md.r1[n - 1] = kh[1] - md.a[1] * inv2 - md.b[1] * inv4;
    md.r2[n - 1] = kh[2] - md.a[2] * inv2 - md.b[2] * inv4;
  }
  return md;
}

// sums = {R0 cos, R1 cos, R2 cos, k R0 sin, k R1 sin, k^2 R0 cos, k^2 R1 cos} at reduced y.
ThetaJet SpectralTheta::finish(const Modes& md, double y, int sign, const double* sums) {
  ThetaJet jet;
  const double t = md.t;
  jet.v = t / 2.0 + md.a[0] * c2(y) + md.b[0] * c4(y) + sums[0];
  jet.t = 0.5 + md.a[1] * c2(y) + md.b[1] * c4(y) + sums[1];
  jet.tt = md.a[2] * c2(y) + md.b[2] * c4(y) + sums[2];
  jet.x = sign * (md.a[0] * c2_prime(y) + md.b[0] * c4_prime(y) - sums[3]);
  jet.xt = sign * (md.a[1] * c2_prime(y) + md.b[1] * c4_prime(y) - sums[4]);
  jet.xx = md.a[0] * 0.5 - md.b[0] * c2(y) - sums[5];
  jet.xxt = md.a[1] * 0.5 - md.b[1] * c2(y) - sums[6];
  jet.delta_xx = -md.a[0];
  jet.delta_xxt = -md.a[1];
  return jet;
}

ThetaJet SpectralTheta::operator()(double x, double t) const {
  return at_points(t, {x}).front();
}

std::vector<ThetaJet> SpectralTheta::at_points(double t, const std::vector<double>& xs) const {
  std::vector<ThetaJet> out(xs.size());
  if (t <= 0) return out;
  const Modes md = modes(t);
  for (size_t p = 0; p < xs.size(); ++p) out[p] = sum_at(md, xs[p]);
  return out;
}

ThetaJet SpectralTheta::sum_at(const Modes& md, double x) {
  // Reduce to y in [0,1]; odd x-derivatives pick up the sign of the reduced argument.
  double yr = x - 2.0 * std::round(x / 2.0);
  const int sign = yr < 0 ? -1 : 1;
  const double y = std::abs(yr);

  double s0 = 0, s1 = 0, s2 = 0;      // sum R_j cos
  double sx0 = 0, sx1 = 0;            // sum k R_j sin
  double sxx0 = 0, sxx1 = 0;          // sum k^2 R_j cos
  const std::complex<double> rot = std::polar(1.0, kPi * y);
  std::complex<double> z = rot;
  for (size_t n = 0; n < md.k.size(); ++n) {
    // Refresh the rotation every 64 modes to keep the recurrence error small.
    if ((n & 63) == 63) z = std::polar(1.0, md.k[n] * y);
    const double cs = z.real(), sn = z.imag(), k = md.k[n];
    s0 += md.r0[n] * cs;
    s1 += md.r1[n] * cs;
    s2 += md.r2[n] * cs;
    sx0 += k * md.r0[n] * sn;
    sx1 += k * md.r1[n] * sn;
    sxx0 += k * k * md.r0[n] * cs;
    sxx1 += k * k * md.r1[n] * cs;
    z *= rot;
  }
  const double sums[7] = {s0, s1, s2, sx0, sx1, sxx0, sxx1};
  return finish(md, y, sign, sums);
}

std::vector<ThetaJet> SpectralTheta::on_uniform_offsets(double t, int m, int count) const {
  if (m < 1) throw InvalidArgument("on_uniform_offsets: m must be positive");
  std::vector<ThetaJet> out(count);
  if (t <= 0) return out;
  const Modes md = modes(t);
  // cos(n pi o / m) depends only on (n o) mod 2m.
  const int period = 2 * m;
  std::vector<double> ctab(period), stab(period);
  for (int q = 0; q < period; ++q) {
    ctab[q] = std::cos(kPi * q / m);
    stab[q] = std::sin(kPi * q / m);
  }
  for (int o = 0; o < count; ++o) {
    const double x = static_cast<double>(o) / m;
    double yr = x - 2.0 * std::round(x / 2.0);
    const int sign = yr < 0 ? -1 : 1;
    const double y = std::abs(yr);
    double s0 = 0, s1 = 0, s2 = 0, sx0 = 0, sx1 = 0, sxx0 = 0, sxx1 = 0;
    long long idx = 0;
    for (size_t n = 0; n < md.k.size(); ++n) {
      idx += o;
      if (idx >= period) idx %= period;
      // Use the unreduced phase: n pi x; the reduction sign is applied afterwards.
      const double cs = ctab[idx], sn = stab[idx] * sign;
      const double k = md.k[n];
      s0 += md.r0[n] * cs;
      s1 += md.r1[n] * cs;
      s2 += md.r2[n] * cs;
      sx0 += k * md.r0[n] * sn;
      sx1 += k * md.r1[n] * sn;
      sxx0 += k * k * md.r0[n] * cs;
      sxx1 += k * k * md.r1[n] * cs;
    }
    const double sums[7] = {s0, s1, s2, sx0, sx1, sxx0, sxx1};
    out[o] = finish(md, y, sign, sums);
  }
  return out;
}

}  // namespace dwl
