#include "dwl/forcing/spike.hpp"

#include <cmath>

#include "dwl/errors.hpp"

namespace dwl {

double SpikeFamily::half_base(int n) const { return 0.5 / std::pow(static_cast<double>(n), alpha); }

double SpikeFamily::area(int n) const { return b0_sq / std::pow(static_cast<double>(n), gamma_ex()); }

void SpikeFamily::validate() const {
  if (!(b0_sq > 0)) throw InvalidArgument("SpikeFamily: b0^2 must be positive");
  if (!(alpha >= 1)) throw InvalidArgument("SpikeFamily: alpha must be at least 1");
  if (!(beta > alpha - 1 && beta <= alpha)) throw InvalidArgument("SpikeFamily: beta must lie in (alpha-1, alpha]");
}

namespace {

int nearest_index(double t) { return std::max(1, static_cast<int>(std::lround(t))); }

// Integral of triangle n from its left foot up to t.
double partial_area(int n, double t, const SpikeFamily& f) {
  const double h = f.half_base(n);
  const double nn = static_cast<double>(n);
  if (t <= nn - h) return 0.0;
  if (t >= nn + h) return f.area(n);
  const double slope = 4.0 * f.b0_sq * std::pow(nn, f.alpha + f.beta);
  if (t <= nn) {
    const double s = t - (nn - h);
    return 0.5 * slope * s * s;
  }
  const double s = t - nn;
  return 0.5 * f.area(n) + 2.0 * f.b0_sq * std::pow(nn, f.beta) * s - 0.5 * slope * s * s;
}

double primitive(double t, const SpikeFamily& f) {
  if (t <= 0) return 0.0;
  const int n = nearest_index(t);
  double sum = 0.0;
  for (int k = 1; k < n; ++k) sum += f.area(k);
  return sum + partial_area(n, t, f);
}

}  // namespace

double spike_value(double t, const SpikeFamily& fam) {
  if (t < 0) return 0.0;
  const int n = nearest_index(t);
  const double nn = static_cast<double>(n);
  const double h = fam.half_base(n);
  if (t < nn - h || t > nn + h) return 0.0;
  const double up = 4.0 * std::pow(nn, fam.alpha + fam.beta);
  // The falling edge starts from the apex value 2 n^beta so that the triangle is continuous.
  const double v = t <= nn ? up * (t - nn + h) : 2.0 * std::pow(nn, fam.beta) - up * (t - nn);
  return fam.b0_sq * std::max(0.0, v);
}

double spike_integral(double t0, double t, const SpikeFamily& fam) {
  if (!(t0 >= 0 && t >= t0)) throw InvalidArgument("spike_integral: need 0 <= t0 <= t");
  return primitive(t, fam) - primitive(t0, fam);
}

std::vector<double> spike_breakpoints(const SpikeFamily& fam, double horizon) {
  std::vector<double> out;
  const int n_max = static_cast<int>(std::ceil(horizon)) + 1;
  for (int n = 1; n <= n_max; ++n) {
    const double h = fam.half_base(n);
    out.push_back(n - h);
    out.push_back(n);
    out.push_back(n + h);
  }
  return out;
}

AveragedHypotheses spike_hypothesis_constants(const SpikeFamily& fam, double p, double horizon) {
  fam.validate();
  if (!(fam.b0_sq < p)) throw InvalidArgument("spike_hypothesis_constants: b0^2 must be below p");
  const double g = fam.gamma_ex();
  AveragedHypotheses h;
  h.g = [fam](double t) { return spike_value(t, fam); };
  h.cumulative = [fam](double t) { return spike_integral(0.0, std::max(0.0, t), fam); };
  h.q = fam.b0_sq / (1.0 - g);
  h.chi = h.kappa = 1.0 - g;
  h.M = 9.0 * fam.b0_sq / (2.0 * (1.0 - g));
  h.sigma = fam.b0_sq * (2.0 + std::pow(2.0, 1.0 - g) / (1.0 - g));
  h.xi = 0.0;
  h.p = p;
  h.breakpoints = spike_breakpoints(fam, horizon);
  return h;
}

}  // namespace dwl
