#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "dwl/core/grid.hpp"
#include "dwl/core/problem.hpp"
#include "dwl/kernels/kernels.hpp"

namespace dwl {

struct PicardConfig {
  double rho = 1.0;
  double lambda_margin = 1.1;
  int max_iter = 200;
  double fix_tol = 1e-10;
  /// Lipschitz constant of f over the tube; NaN means "estimate by sampling".
  double lipschitz_mu = std::numeric_limits<double>::quiet_NaN();
  int nx = 101;
  double dt = 0.01;
  double horizon = 1.0;
  /// Safety factor on the sampled sup of |f| and on the sampled Lipschitz constant.
  double safety = 1.2;
  /// Random tube points per grid node, on top of the 81 corners of the tube box.
  int random_samples = 8;
  std::uint64_t seed = 20240607;

  void validate() const;
};

struct SegmentReport {
  double a = 0.0, b = 0.0;
  double M = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
  /// Factor mu/lambda [1/lambda + 1/c + 1 + 1/eps + 2c^2/(eps lambda)] of the contraction estimate.
  double contraction_bound = 0.0;
  /// Ratios of successive iterate distances in the weighted norm.
  std::vector<double> ratios;
  double max_ratio() const;
};

/// b = a + min{T-a, rho/M, c rho/M, eps rho/M, sqrt(2 rho/M)}; b = T when M = 0.
double step_interval(double a, double T, double M, double rho, double c, double epsilon);

/// margin * max{1, mu (2 + 1/c + (1 + 2c^2)/eps)}.
double lambda_choice(double mu, double c, double epsilon, double margin);

/// mu/lambda [1/lambda + 1/c + 1 + 1/eps + 2c^2/(eps lambda)].
double contraction_factor(double mu, double lambda, double c, double epsilon);

/// sup|e^{-lambda (t - t_ref)} u| + the same for u_x, u_t, u_xx over the grid.
/// Requires ut, ux and uxx. The shift t_ref only rescales the norm by a constant.
double weighted_norm(const GridFunction& g, double lambda, double t_ref = 0.0);

/// The integral map on one grid for a problem with zero boundary data.
///
/// Grids passed in and returned carry u, ut, ux, uxx. A "segment" grid covers the
/// time levels a..k of the global grid, with t0 = a dt.
class PicardOperator {
 public:
  PicardOperator(const ProblemSpec& spec, int nx, double dt, int nt);

  int nx() const { return nx_; }
  int nt() const { return nt_; }
  double dt() const { return dt_; }
  const KernelTable& table() const { return *table_; }

  /// Level 0 from the initial data.
  GridFunction initial_level() const;

  /// omega_v on levels a..k_end: data integrals plus the history integral over [0, a].
  /// `history` must hold levels 0..a (it may be longer; later levels are ignored).
  GridFunction omega(const GridFunction& history, int a, int k_end) const;

  /// T_v u on the levels of `candidate` (which starts at level a and must agree with
  /// the history there). `omega_seg` is omega on the same levels.
  GridFunction apply(const GridFunction& omega_seg, const GridFunction& candidate) const;

  /// Throws TubeViolation if candidate leaves the rho-tube around omega_seg.
  static void check_tube(const GridFunction& omega_seg, const GridFunction& candidate, double rho);

 private:
  struct Quad;
  void accumulate(std::vector<Quad>& out, int lag, double weight, const std::vector<double>& F) const;
  std::vector<double> forcing_row(const GridFunction& g, int k_local, double t) const;

  ProblemSpec spec_;
  int nx_, nt_;
  double dt_;
  std::shared_ptr<const KernelTable> table_;
  std::vector<double> u0_, u0xx_, g1_;
};

struct PicardResult {
  GridFunction solution;
  std::vector<SegmentReport> segments;
  /// Horizon actually reached, in the units of the original problem.
  double reached = 0.0;
};

/// Segment-by-segment continuation. Problems with boundary data are rescaled and
/// homogenized first and mapped back at the end.
/// Throws PicardStalled, NoConvergence or TubeViolation.
PicardResult solve_picard(const ProblemSpec& spec, const PicardConfig& cfg);

}  // namespace dwl
