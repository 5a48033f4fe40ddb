#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwl/forcing/spike.hpp"
#include "dwl/functionals/functionals.hpp"
#include "dwl/scenarios/report.hpp"
#include "dwl/scenarios/schedules.hpp"

namespace dwl {

/// Damping coefficient a(x, t, u, u_x, u_xx, u_t) in f = F(u) - a u_t.
using DampingFn = std::function<double(double x, double t, double u, double ux, double uxx, double ut)>;

/// Initial state phi = u0_amp sin(u0_mode pi x), psi = u1_amp sin(u1_mode pi x).
struct InitialState {
  double u0_amp = 0.1;
  double u1_amp = 0.0;
  int u0_mode = 1;
  int u1_mode = 1;
};

/// Settings of a decay run for the exponential (theorem 2 or 3) or power-law (theorem 4) claim.
///
/// The damping is a = a0 + a1 u^2. The declared bounds (inf_a, A, A_prime, tau_A, K) feed the
/// schedules and are re-checked on every visited state.
struct DecayExperimentConfig {
  int theorem = 2;
  double epsilon = 1.0;
  std::string potential = "sine_gordon";  // sine_gordon | zero | linear | power
  double kappa = 1.0;                     // strength for linear and power
  double tau_pot = 0.5;                   // exponent for power
  double a0 = 0.5, a1 = 0.0;
  double inf_a = 0.5;
  double A = 0.5, A_prime = 0.0, tau_A = 0.0;
  double K = 1.0;
  std::vector<InitialState> states{{0.05, 0.0}, {0.1, 0.0}, {0.1, 0.3}};
  double horizon = 20.0;
  int nx = 201;
  double dt = 2.5e-4;
  double sample_every = 0.01;
  double slack = 0.01;
  double wdot_tol = 1e-6;

  void validate() const;
  PotentialSpec make_potential() const;
  DampingFn make_damping() const;
  nlohmann::json to_json() const;
  static DecayExperimentConfig from_json(const nlohmann::json& j);
};

/// Solve by finite differences for every initial state, record d, d1, V, W, v along the
/// run, fit ln d on the second half, and judge the claim of the selected theorem.
StabilityReport run_decay_experiment(const DecayExperimentConfig& cfg);

/// Settings of the boundedness run: f = b(t) sin u with b^2 = c1^2 g(t) / A, g the triangle train.
struct BoundednessConfig {
  SpikeFamily family;
  double epsilon = 1.0;
  double gamma = 1.0;
  std::vector<double> alphas{0.5, 1.0};
  double duration = 30.0;
  int nx = 101;
  double dt = 1e-3;
  double sample_every = 0.01;
  double slack = 0.01;
  double scan_horizon = 200.0;

  void validate() const;
  nlohmann::json to_json() const;
  static BoundednessConfig from_json(const nlohmann::json& j);
};

/// For each alpha, start at t0 = s(alpha) from two states with d(t0) just below alpha and
/// check d(t) < beta(alpha) and V(t) <= y(t), y the comparison solution from V(t0).
StabilityReport run_boundedness_experiment(const BoundednessConfig& cfg);

/// Random-state certification of the constants: Poincare ratios, the V sandwich, and the
/// lower bounds on W and v for potentials with F_u <= K.
struct CertifyConfig {
  std::vector<double> epsilons{1.0};
  std::vector<double> gammas{1.0};
  double K = 1.0;
  int samples = 1000;
  int nx = 257;
  int max_modes = 8;
  std::uint64_t seed = 7;

  void validate() const;
  nlohmann::json to_json() const;
  static CertifyConfig from_json(const nlohmann::json& j);
};

/// States are random sine polynomials sampled with exact derivatives; on this grid the
/// trapezoid rule integrates their squares exactly. Potentials: F = K u - u^3 and, when
/// K >= 1, F = -sin u.
StabilityReport run_certification(const CertifyConfig& cfg);

/// Least-squares slope of -ln d over samples with t >= t_from; NaN with fewer than 2 samples.
double fit_decay_rate(const std::vector<SeriesRow>& rows, int run, double t_from);

}  // namespace dwl
