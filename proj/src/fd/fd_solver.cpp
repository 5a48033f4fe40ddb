#include "dwl/fd/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dwl/errors.hpp"

namespace dwl {

void FDConfig::validate(double epsilon, double c) const {
  if (nx < 4) throw InvalidArgument("FDConfig: nx must be at least 4");
  if (!(dt > 0)) throw InvalidArgument("FDConfig: dt must be positive");
  if (theta_weight < 0 || theta_weight > 1) throw InvalidArgument("FDConfig: theta_weight must lie in [0, 1]");
  if (output_stride < 1) throw InvalidArgument("FDConfig: output_stride must be positive");
  if (scheme == FDScheme::explicit_euler) {
    const double dx = 1.0 / (nx - 1);
    if (dt > dx / c) throw InvalidArgument("FDConfig: explicit scheme violates dt <= dx/c");
    if (dt > dx * dx / (2.0 * epsilon))
      throw InvalidArgument("FDConfig: explicit scheme violates dt <= dx^2/(2 eps)");
  }
}

namespace {

// Thomas algorithm for a constant tridiagonal matrix (diag d, off-diagonal o).
void solve_tridiagonal(double d, double o, std::vector<double>& rhs, std::vector<double>& scratch) {
  const size_t n = rhs.size();
  scratch.resize(n);
  scratch[0] = o / d;
  rhs[0] /= d;
  for (size_t i = 1; i < n; ++i) {
    const double m = d - o * scratch[i - 1];
    scratch[i] = o / m;
    rhs[i] = (rhs[i] - o * rhs[i - 1]) / m;
  }
  for (size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

class Stepper {
 public:
  Stepper(const ProblemSpec& spec, const FDConfig& cfg, double dt)
      : spec_(spec), cfg_(cfg), n_(cfg.nx), dx_(1.0 / (cfg.nx - 1)), dt_(dt) {
    ux_.resize(n_);
    uxx_.resize(n_);
    f_.resize(n_);
  }

  // Forcing at time t for the state (u, v).
  void forcing(double t, const std::vector<double>& u, const std::vector<double>& v) {
    const double h2 = dx_ * dx_;
    for (int i = 1; i + 1 < n_; ++i) {
      ux_[i] = (u[i + 1] - u[i - 1]) / (2 * dx_);
      uxx_[i] = (u[i + 1] - 2 * u[i] + u[i - 1]) / h2;
      f_[i] = spec_.f(static_cast<double>(i) * dx_, t, u[i], ux_[i], uxx_[i], v[i]);
    }
  }

  void step(double t, std::vector<double>& u, std::vector<double>& v) {
    if (cfg_.scheme == FDScheme::explicit_euler) {
      step_explicit(t, u, v);
      return;
    }
    forcing(t, u, v);
    std::vector<double> u1, v1;
    implicit_update(t, u, v, u1, v1);
    if (cfg_.corrector) {
      std::vector<double> um(n_), vm(n_);
      for (int i = 0; i < n_; ++i) {
        um[i] = 0.5 * (u[i] + u1[i]);
        vm[i] = 0.5 * (v[i] + v1[i]);
      }
      forcing(t + 0.5 * dt_, um, vm);
      implicit_update(t, u, v, u1, v1);
    }
    u.swap(u1);
    v.swap(v1);
  }

 private:
  void implicit_update(double t, const std::vector<double>& u, const std::vector<double>& v,
                       std::vector<double>& u1, std::vector<double>& v1) {
    const double c2 = spec_.c * spec_.c;
    const double th = cfg_.theta_weight;
    const double h2 = dx_ * dx_;
    const double alpha = c2 * dt_ / 4.0 + spec_.epsilon * th;         // implicit v-Laplacian weight
    const double beta = c2 * dt_ / 4.0 + spec_.epsilon * (1.0 - th);  // explicit v-Laplacian weight
    const double t1 = t + dt_;
    const double vl = spec_.left_t(t1), vr = spec_.right_t(t1);
    rhs_.assign(n_ - 2, 0.0);
    for (int i = 1; i + 1 < n_; ++i) {
      const double lap_u = (u[i + 1] - 2 * u[i] + u[i - 1]) / h2;
      const double lap_v = (v[i + 1] - 2 * v[i] + v[i - 1]) / h2;
      rhs_[i - 1] = v[i] + dt_ * (c2 * lap_u + beta * lap_v + f_[i]);
    }
    const double r = dt_ * alpha / h2;
    rhs_.front() += r * vl;
    rhs_.back() += r * vr;
    solve_tridiagonal(1.0 + 2.0 * r, -r, rhs_, scratch_);
    v1.assign(n_, 0.0);
    v1[0] = vl;
    v1[n_ - 1] = vr;
    std::copy(rhs_.begin(), rhs_.end(), v1.begin() + 1);
    u1.assign(n_, 0.0);
    for (int i = 1; i + 1 < n_; ++i) u1[i] = u[i] + 0.5 * dt_ * (v[i] + v1[i]);
    u1[0] = spec_.left(t1);
    u1[n_ - 1] = spec_.right(t1);
  }

  void step_explicit(double t, std::vector<double>& u, std::vector<double>& v) {
    forcing(t, u, v);
    const double c2 = spec_.c * spec_.c, h2 = dx_ * dx_;
    std::vector<double> v1(n_);
    for (int i = 1; i + 1 < n_; ++i) {
      const double lap_u = (u[i + 1] - 2 * u[i] + u[i - 1]) / h2;
      const double lap_v = (v[i + 1] - 2 * v[i] + v[i - 1]) / h2;
      v1[i] = v[i] + dt_ * (c2 * lap_u + spec_.epsilon * lap_v + f_[i]);
    }
    const double t1 = t + dt_;
    v1[0] = spec_.left_t(t1);
    v1[n_ - 1] = spec_.right_t(t1);
    for (int i = 1; i + 1 < n_; ++i) u[i] += dt_ * v1[i];
    u[0] = spec_.left(t1);
    u[n_ - 1] = spec_.right(t1);
    v.swap(v1);
  }

  const ProblemSpec& spec_;
  const FDConfig& cfg_;
  int n_;
  double dx_, dt_;
  std::vector<double> ux_, uxx_, f_, rhs_, scratch_;
};

double sup_norm(const std::vector<double>& a) {
  double m = 0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void march_fd(const ProblemSpec& spec, const FDConfig& cfg, double t0, double t_end, const StepObserver& observer) {
  spec.validate();
  if (!(t_end > t0)) throw InvalidArgument("march_fd: t_end must exceed t0");
  const long long steps = std::max(1LL, static_cast<long long>(std::ceil((t_end - t0) / cfg.dt - 1e-9)));
  FDConfig eff = cfg;
  eff.dt = (t_end - t0) / static_cast<double>(steps);
  eff.validate(spec.epsilon, spec.c);

  const int n = eff.nx;
  const double dx = 1.0 / (n - 1);
  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = spec.init_u(i * dx);
    v[i] = spec.init_ut(i * dx);
  }
  u[0] = spec.left(t0);
  u[n - 1] = spec.right(t0);
  v[0] = spec.left_t(t0);
  v[n - 1] = spec.right_t(t0);
  if (observer && !observer(t0, u, v)) return;

  const double scale0 = 1.0 + std::max(sup_norm(u), sup_norm(v));
  Stepper stepper(spec, eff, eff.dt);
  for (long long k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * eff.dt;
    stepper.step(t, u, v);
    const double size = std::max(sup_norm(u), sup_norm(v));
    if (!std::isfinite(size) || size > eff.blowup_factor * scale0) {
      std::ostringstream msg;
      msg << "finite-difference run became unstable at t = " << t + eff.dt << " (sup norm " << size << ")";
      throw InstabilityError(msg.str());
    }
    if (observer && !observer(t0 + static_cast<double>(k + 1) * eff.dt, u, v)) return;
  }
}

GridFunction solve_fd(const ProblemSpec& spec, const FDConfig& cfg, double horizon, double t0) {
  const long long steps = std::max(1LL, static_cast<long long>(std::ceil((horizon - t0) / cfg.dt - 1e-9)));
  const double dt = (horizon - t0) / static_cast<double>(steps);
  const int stride = cfg.output_stride;
  const int nt = static_cast<int>(steps / stride) + 1;
  GridFunction g(cfg.nx, nt, dt * stride, t0);
  long long k = 0;
  march_fd(spec, cfg, t0, horizon, [&](double, const std::vector<double>& u, const std::vector<double>& v) {
    if (k % stride == 0 && k / stride < nt) {
      const int row = static_cast<int>(k / stride);
      std::copy(u.begin(), u.end(), g.row(g.u, row).begin());
      std::copy(v.begin(), v.end(), g.row(g.ut, row).begin());
    }
    ++k;
    return true;
  });
  return g;
}

Forcing manufactured_forcing(const ManufacturedSolution& exact, double epsilon, double c) {
  return [exact, epsilon, c](double x, double t, double, double, double, double) {
    const double uxxt = exact.u_xxt ? exact.u_xxt(x, t) : 0.0;
    const double uxx = exact.u_xx ? exact.u_xx(x, t) : 0.0;
    const double utt = exact.u_tt ? exact.u_tt(x, t) : 0.0;
    return -epsilon * uxxt - c * c * uxx + utt;
  };
}

ProblemSpec manufactured_problem(const ManufacturedSolution& exact, double epsilon, double c) {
  ProblemSpec spec;
  spec.epsilon = epsilon;
  spec.c = c;
  spec.forcing = manufactured_forcing(exact, epsilon, c);
  auto at = [](const std::function<double(double, double)>& g, bool in_x, double fixed) -> Profile {
    if (!g) return {};
    if (in_x) return [g, fixed](double x) { return g(x, fixed); };
    return [g, fixed](double t) { return g(fixed, t); };
  };
  spec.u0 = at(exact.u, true, 0.0);
  spec.u1 = at(exact.u_t, true, 0.0);
  spec.u0_x = at(exact.u_x, true, 0.0);
  spec.u0_xx = at(exact.u_xx, true, 0.0);
  spec.h1 = at(exact.u, false, 0.0);
  spec.h2 = at(exact.u, false, 1.0);
  spec.h1_t = at(exact.u_t, false, 0.0);
  spec.h2_t = at(exact.u_t, false, 1.0);
  spec.h1_tt = at(exact.u_tt, false, 0.0);
  spec.h2_tt = at(exact.u_tt, false, 1.0);
  return spec;
}

double ConvergenceOrders::min_space_order() const {
  return space_orders.empty() ? 0.0 : *std::min_element(space_orders.begin(), space_orders.end());
}
double ConvergenceOrders::min_time_order() const {
  return time_orders.empty() ? 0.0 : *std::min_element(time_orders.begin(), time_orders.end());
}

namespace {

std::vector<double> final_state(const ProblemSpec& spec, FDConfig cfg, double horizon) {
  std::vector<double> last;
  march_fd(spec, cfg, 0.0, horizon, [&](double, const std::vector<double>& u, const std::vector<double>&) {
    last = u;
    return true;
  });
  return last;
}

double order_of(double coarse, double fine) {
  if (coarse == 0.0 && fine == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(coarse / fine);
}

}  // namespace

ConvergenceOrders convergence_study(const ProblemSpec& spec, const ManufacturedSolution& exact,
                                    const std::vector<int>& resolutions, const std::vector<double>& dts,
                                    double horizon, double space_dt) {
  if (!exact.u) throw InvalidArgument("convergence_study: exact solution required");
  ConvergenceOrders out;
  for (int nx : resolutions) {
    FDConfig cfg;
    cfg.nx = nx;
    cfg.dt = space_dt;
    const auto u = final_state(spec, cfg, horizon);
    double err = 0.0;
    for (int i = 0; i < nx; ++i) err = std::max(err, std::abs(u[i] - exact.u(static_cast<double>(i) / (nx - 1), horizon)));
    out.nx.push_back(nx);
    out.space_errors.push_back(err);
  }
  for (size_t i = 1; i < out.space_errors.size(); ++i)
    out.space_orders.push_back(order_of(out.space_errors[i - 1], out.space_errors[i]));

  if (!dts.empty() && !resolutions.empty()) {
    const int nx = resolutions.back();
    std::vector<std::vector<double>> finals;
    for (double dt : dts) {
      FDConfig cfg;
      cfg.nx = nx;
      cfg.dt = dt;
      finals.push_back(final_state(spec, cfg, horizon));
    }
    for (size_t k = 1; k < finals.size(); ++k) {
      double diff = 0.0;
      for (int i = 0; i < nx; ++i) diff = std::max(diff, std::abs(finals[k][i] - finals[k - 1][i]));
      out.dts.push_back(dts[k - 1]);
      out.time_differences.push_back(diff);
    }
    for (size_t k = 1; k < out.time_differences.size(); ++k)
      out.time_orders.push_back(order_of(out.time_differences[k - 1], out.time_differences[k]));
  }
  return out;
}

double JointRefinement::min_order() const {
  return orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end());
}

JointRefinement joint_refinement_study(const ProblemSpec& spec, const ManufacturedSolution& exact,
                                       const std::vector<int>& resolutions, double dt0, double horizon) {
  if (!exact.u) throw InvalidArgument("joint_refinement_study: exact solution required");
  if (resolutions.empty() || !(dt0 > 0)) throw InvalidArgument("joint_refinement_study: bad resolutions or dt0");
  JointRefinement out;
  for (int nx : resolutions) {
    FDConfig cfg;
    cfg.nx = nx;
    cfg.dt = dt0 * (resolutions.front() - 1) / (nx - 1);
    const auto u = final_state(spec, cfg, horizon);
    double err = 0.0;
    for (int i = 0; i < nx; ++i) err = std::max(err, std::abs(u[i] - exact.u(static_cast<double>(i) / (nx - 1), horizon)));
    out.nx.push_back(nx);
    out.dts.push_back(cfg.dt);
    out.errors.push_back(err);
  }
  for (size_t i = 1; i < out.errors.size(); ++i) out.orders.push_back(order_of(out.errors[i - 1], out.errors[i]));
  return out;
}

}  // namespace dwl
