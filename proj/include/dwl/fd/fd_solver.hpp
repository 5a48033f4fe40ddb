#pragma once

#include <functional>
#include <vector>

#include "dwl/core/grid.hpp"
#include "dwl/core/problem.hpp"

namespace dwl {

enum class FDScheme { semi_implicit, explicit_euler };

/// Finite-difference settings. The semi-implicit scheme is Crank-Nicolson on the
/// first-order system u_t = v, v_t = c^2 u_xx + eps v_xx + f; the viscous term uses
/// weight theta_weight and is solved with one tridiagonal system per step.
struct FDConfig {
  int nx = 201;
  double dt = 2.5e-4;
  FDScheme scheme = FDScheme::semi_implicit;
  double theta_weight = 0.5;
  /// One predictor-corrector pass for the forcing (second order in time).
  bool corrector = true;
  /// Keep every k-th time level in the returned grid.
  int output_stride = 1;
  /// Abort when the state grows by this factor over its initial size.
  double blowup_factor = 1e6;

  /// Throws InvalidArgument, including CFL violations of the explicit scheme.
  void validate(double epsilon, double c) const;
};

/// Called after every step with the current time, u and u_t. Returning false stops the run.
using StepObserver = std::function<bool(double t, const std::vector<double>& u, const std::vector<double>& ut)>;

/// March from t0 to t_end. The step is shrunk so that it divides t_end - t0 evenly.
/// The observer also sees the initial state. Throws InstabilityError on blow-up.
void march_fd(const ProblemSpec& spec, const FDConfig& cfg, double t0, double t_end, const StepObserver& observer);

/// Solve on [t0, horizon] and return u and u_t on the grid.
GridFunction solve_fd(const ProblemSpec& spec, const FDConfig& cfg, double horizon, double t0 = 0.0);

/// An exact solution with every derivative the operator needs.
struct ManufacturedSolution {
  std::function<double(double, double)> u, u_t, u_tt, u_x, u_xx, u_xxt;
};

/// f = L u = -eps u_xxt - c^2 u_xx + u_tt as a forcing that ignores the state.
Forcing manufactured_forcing(const ManufacturedSolution& exact, double epsilon, double c);

/// Problem whose data are taken from the exact solution; forcing defaults to L u.
ProblemSpec manufactured_problem(const ManufacturedSolution& exact, double epsilon, double c);

struct ConvergenceOrders {
  std::vector<int> nx;
  std::vector<double> space_errors;  // sup error against the exact solution
  std::vector<double> space_orders;  // log2 of successive error ratios
  std::vector<double> dts;
  std::vector<double> time_differences;  // sup |u_dt - u_{dt/2}| at the final time
  std::vector<double> time_orders;
  double min_space_order() const;
  double min_time_order() const;
};

/// Observed orders: in space against the exact solution with a tiny time step,
/// in time by self-convergence (Richardson ratios) at the finest nx.
/// Resolutions must double; dts must halve.
ConvergenceOrders convergence_study(const ProblemSpec& spec, const ManufacturedSolution& exact,
                                    const std::vector<int>& resolutions, const std::vector<double>& dts,
                                    double horizon, double space_dt = 2.5e-4);

/// Errors against the exact solution when nx and dt are refined together
/// (dt = dt0 (resolutions[0] - 1) / (nx - 1)). Useful when the exact solution is
/// reproduced by the spatial stencils, so that a fixed-dt space study only sees the
/// time error.
struct JointRefinement {
  std::vector<int> nx;
  std::vector<double> dts;
  std::vector<double> errors;  // sup error at the final time
  std::vector<double> orders;
  double min_order() const;
};

JointRefinement joint_refinement_study(const ProblemSpec& spec, const ManufacturedSolution& exact,
                                       const std::vector<int>& resolutions, double dt0, double horizon);

}  // namespace dwl
