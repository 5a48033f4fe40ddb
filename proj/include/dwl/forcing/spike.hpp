#pragma once

#include <vector>

#include "dwl/comparison/comparison.hpp"

namespace dwl {

/// Train of isosceles triangles: triangle n >= 1 is centred at t = n, has base
/// 1/n^alpha and apex height 2 b0^2 n^beta, so its area is b0^2 / n^gamma with
/// gamma = alpha - beta in [0, 1).
struct SpikeFamily {
  double b0_sq = 0.2;
  double alpha = 1.0;
  double beta = 0.6;

  double gamma_ex() const { return alpha - beta; }
  double half_base(int n) const;
  double area(int n) const;

  /// Throws InvalidArgument unless b0_sq > 0, alpha >= 1 and alpha - 1 < beta <= alpha.
  /// alpha >= 1 keeps every base at most 1, so the triangles are disjoint.
  void validate() const;
};

/// b^2(t); zero outside the supports.
double spike_value(double t, const SpikeFamily& fam);

/// int_{t0}^{t} b^2 in closed form.
double spike_integral(double t0, double t, const SpikeFamily& fam);

/// Feet and apexes of every triangle that starts before `horizon`.
std::vector<double> spike_breakpoints(const SpikeFamily& fam, double horizon);

/// g = b^2 with g1 = g2 = 0 and q = b0^2/(1-gamma), chi = kappa = 1 - gamma,
/// M = 9 b0^2 / [2 (1-gamma)], sigma = b0^2 (2 + 2^{1-gamma}/(1-gamma)).
/// Throws InvalidArgument when b0_sq >= p.
AveragedHypotheses spike_hypothesis_constants(const SpikeFamily& fam, double p, double horizon = 400.0);

}  // namespace dwl
