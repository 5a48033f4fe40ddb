#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dwl/core/problem.hpp"

namespace dwl {

/// Space-time samples on the uniform grid x_i = i/(nx-1), t_k = t0 + k dt.
/// Storage is time-major: value (k, i) lives at index k*nx + i.
/// The companion arrays ut, ux, uxx are either empty or the same size as u.
struct GridFunction {
  int nx = 0;
  int nt = 0;
  double dt = 0.0;
  double t0 = 0.0;
  std::vector<double> u, ut, ux, uxx;

  GridFunction() = default;
  GridFunction(int nx, int nt, double dt, double t0 = 0.0, bool with_ut = true);

  double dx() const { return 1.0 / (nx - 1); }
  double x(int i) const { return static_cast<double>(i) / (nx - 1); }
  double t(int k) const { return t0 + k * dt; }
  double t_end() const { return t(nt - 1); }

  double& at(int k, int i) { return u[static_cast<size_t>(k) * nx + i]; }
  double at(int k, int i) const { return u[static_cast<size_t>(k) * nx + i]; }

  std::span<const double> row(const std::vector<double>& a, int k) const {
    return {a.data() + static_cast<size_t>(k) * nx, static_cast<size_t>(nx)};
  }
  std::span<double> row(std::vector<double>& a, int k) {
    return {a.data() + static_cast<size_t>(k) * nx, static_cast<size_t>(nx)};
  }

  bool has_ut() const { return !ut.empty(); }
  bool has_space_derivatives() const { return !ux.empty() && !uxx.empty(); }

  /// Fill ux and uxx from u with second-order stencils.
  void fill_space_derivatives();

  /// Bilinear interpolation of one of the arrays at (x, t); t is clamped to the stored range.
  double interpolate(const std::vector<double>& a, double x, double t) const;
};

/// First derivative: central in the interior, one-sided second order at the ends.
std::vector<double> diff1(std::span<const double> f, double dx);
/// Second derivative: central in the interior, one-sided second order at the ends.
std::vector<double> diff2(std::span<const double> f, double dx);
/// Composite trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> f, double dx);

/// Largest deviation of the boundary columns from h1, h2 at stored times.
double boundary_mismatch(const GridFunction& g, const ProblemSpec& spec);

/// A spatial snapshot (phi, psi) = (u, u_t) at one time, with derivative samples of phi.
struct StatePair {
  std::vector<double> phi, phi_x, phi_xx, psi;
  bool problem_p = true;

  int n() const { return static_cast<int>(phi.size()); }
  double dx() const { return 1.0 / (n() - 1); }

  /// Sample callables on nx points; derivative callables are required.
  static StatePair from_functions(int nx, const Profile& phi, const Profile& phi_x,
                                  const Profile& phi_xx, const Profile& psi, bool problem_p = true);
  /// Derivative samples from the grid stencils.
  static StatePair from_samples(std::vector<double> phi, std::vector<double> psi,
                                bool problem_p = true);
  /// Row k of a solution grid. Uses stored ux/uxx when present.
  static StatePair from_grid(const GridFunction& g, int k, bool problem_p = true);

  /// Throws InvalidArgument on size mismatch or nonzero ends of a problem-P state.
  void validate(double tol = 1e-12) const;
};

/// CSV with header x,t,u,ut and one row per grid node (time-major).
void write_grid_csv(std::ostream& os, const GridFunction& g);
void write_grid_csv(const std::string& path, const GridFunction& g);
GridFunction read_grid_csv(std::istream& is);
GridFunction read_grid_csv(const std::string& path);

}  // namespace dwl
