#include "dwl/functionals/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dwl/errors.hpp"

namespace dwl {

double PotentialSpec::derivative(double u) const {
  if (F_prime) return F_prime(u);
  if (!F) return 0.0;
  const double h = 1e-5 * std::max(1.0, std::abs(u));
  return (F(u + h) - F(u - h)) / (2 * h);
}

double PotentialSpec::primitive(double phi) const {
  if (antiderivative) return antiderivative(phi);
  if (!F || phi == 0.0) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  return GK::integrate(F, 0.0, phi, 12, 1e-12);
}

void PotentialSpec::validate() const {
  if (std::abs(value(0.0)) > 1e-12) throw InvalidArgument("PotentialSpec: F(0) must vanish");
}

PotentialSpec PotentialSpec::zero() { return {}; }

PotentialSpec PotentialSpec::sine_gordon() {
  PotentialSpec p;
  p.F = [](double u) { return -std::sin(u); };
  p.F_prime = [](double u) { return -std::cos(u); };
  p.antiderivative = [](double phi) { return std::cos(phi) - 1.0; };
  return p;
}

PotentialSpec PotentialSpec::linear(double k) {
  PotentialSpec p;
  p.F = [k](double u) { return -k * u; };
  p.F_prime = [k](double) { return -k; };
  p.antiderivative = [k](double phi) { return -0.5 * k * phi * phi; };
  return p;
}

PotentialSpec PotentialSpec::power(double kappa, double tau) {
  PotentialSpec p;
  p.F = [kappa, tau](double u) { return u == 0.0 ? 0.0 : -kappa * std::copysign(std::pow(std::abs(u), tau), u); };
  p.F_prime = [kappa, tau](double u) {
    return u == 0.0 && tau < 1 ? -HUGE_VAL : -kappa * tau * std::pow(std::abs(u), tau - 1.0);
  };
  p.antiderivative = [kappa, tau](double phi) { return -kappa * std::pow(std::abs(phi), tau + 1.0) / (tau + 1.0); };
  return p;
}

namespace {

template <class Fn>
double integrate_samples(const StatePair& s, Fn&& fn) {
  s.validate(1e-9);
  const int n = s.n();
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = fn(i);
  return trapezoid(vals, s.dx());
}

}  // namespace

double distance_d(const StatePair& s) {
  return std::sqrt(integrate_samples(s, [&](int i) {
    return s.phi[i] * s.phi[i] + s.phi_x[i] * s.phi_x[i] + s.phi_xx[i] * s.phi_xx[i] + s.psi[i] * s.psi[i];
  }));
}

double distance_d1(const StatePair& s) {
  return std::sqrt(integrate_samples(
      s, [&](int i) { return s.phi[i] * s.phi[i] + s.phi_x[i] * s.phi_x[i] + s.psi[i] * s.psi[i]; }));
}

double lyapunov_V(const StatePair& s, double gamma, double epsilon) {
  if (!(gamma > 0)) throw InvalidArgument("lyapunov_V: gamma must be positive");
  return 0.5 * integrate_samples(s, [&](int i) {
    const double a = epsilon * s.phi_xx[i] - s.psi[i];
    return a * a + gamma * s.psi[i] * s.psi[i] + (1.0 + gamma) * s.phi_x[i] * s.phi_x[i];
  });
}

double potential_integral(const StatePair& s, const PotentialSpec& pot) {
  if (!pot.F) return 0.0;
  return integrate_samples(s, [&](int i) { return pot.primitive(s.phi[i]); });
}

double potential_curvature_integral(const StatePair& s, const PotentialSpec& pot) {
  return integrate_samples(s, [&](int i) { return pot.value(s.phi[i]) * s.phi_xx[i]; });
}

double lyapunov_W(const StatePair& s, double gamma, double epsilon, const PotentialSpec& pot) {
  return lyapunov_V(s, gamma, epsilon) - (1.0 + gamma) * potential_integral(s, pot);
}

double hamiltonian_v(const StatePair& s, const PotentialSpec& pot) {
  const double kinetic = integrate_samples(s, [&](int i) { return s.psi[i] * s.psi[i] + s.phi_x[i] * s.phi_x[i]; });
  return 0.5 * kinetic - potential_integral(s, pot);
}

double w_dot_identity(const StatePair& s, double gamma, double epsilon, const PotentialSpec& pot,
                      std::span<const double> a) {
  if (static_cast<int>(a.size()) != s.n()) throw InvalidArgument("w_dot_identity: damping samples have wrong size");
  const std::vector<double> psi_x = diff1(s.psi, s.dx());
  return -integrate_samples(s, [&](int i) {
    const double uxx = s.phi_xx[i], ut = s.psi[i];
    return epsilon * uxx * uxx + epsilon * gamma * psi_x[i] * psi_x[i] + a[i] * (1.0 + gamma) * ut * ut +
           epsilon * pot.value(s.phi[i]) * uxx - epsilon * a[i] * uxx * ut;
  });
}

PoincareRatios poincare_check(const StatePair& s) {
  PoincareRatios r;
  const double i0 = integrate_samples(s, [&](int i) { return s.phi[i] * s.phi[i]; });
  const double i1 = integrate_samples(s, [&](int i) { return s.phi_x[i] * s.phi_x[i]; });
  const double i2 = integrate_samples(s, [&](int i) { return s.phi_xx[i] * s.phi_xx[i]; });
  if (i0 <= 0.0 || i1 <= 0.0) {
    r.degenerate = true;
    return r;
  }
  r.ratio1 = i1 / i0;
  r.ratio2 = i2 / i1;
  return r;
}

double m_of(const PotentialSpec& pot, double r) {
  if (r < 0 || std::isnan(r)) throw InvalidArgument("m_of: r must be nonnegative");
  if (!pot.F && !pot.F_prime) return 0.0;
  constexpr double kPerUnit = 2048.0;
  // Grid nodes are multiples of 1/2048 covering [-r', r'] with r' >= r the next node,
  // so the sample sets are nested and m is nondecreasing in r.
  const long long half = static_cast<long long>(std::ceil(r * kPerUnit));
  const double h = 1.0 / kPerUnit;
  double best = std::abs(pot.derivative(0.0));
  std::vector<std::pair<double, double>> samples;
  samples.reserve(static_cast<size_t>(2 * half + 1));
  for (long long j = -half; j <= half; ++j) {
    const double z = static_cast<double>(j) * h;
    const double v = std::abs(pot.derivative(z));
    samples.emplace_back(z, v);
    best = std::max(best, v);
  }
  // Refine by 4 in the cells around every sample within 1e-3 of the maximum.
  const double cut = best * (1.0 - 1e-3);
  double refined = best;
  for (const auto& [z, v] : samples) {
    if (v < cut) continue;
    for (int q = -3; q <= 3; ++q) {
      if (q == 0) continue;
      const double zz = z + q * h / 4.0;
      refined = std::max(refined, std::abs(pot.derivative(zz)));
    }
  }
  return refined * 1.001;
}

double B_of(const PotentialSpec& pot, double d) {
  if (d < 0) throw InvalidArgument("B_of: d must be nonnegative");
  return std::sqrt(1.0 + m_of(pot, d)) * d;
}

double B_inverse(const PotentialSpec& pot, double y) {
  if (y < 0 || std::isnan(y)) throw InvalidArgument("B_inverse: y must be nonnegative");
  if (y == 0.0) return 0.0;
  double lo = 0.0, hi = y;  // B(d) >= d, so the root is at most y
  if (B_of(pot, hi) < y) throw InvalidArgument("B_inverse: y outside the range of B");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (B_of(pot, mid) < y) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dwl
