#include <doctest.h>

#include <cmath>

#include "dwl/errors.hpp"
#include "dwl/fd/fd_solver.hpp"

using namespace dwl;

namespace {

const double kPi = std::acos(-1.0);

ManufacturedSolution decaying_mode() {
  ManufacturedSolution m;
  m.u = [](double x, double t) { return std::exp(-t) * std::sin(kPi * x); };
  m.u_t = [](double x, double t) { return -std::exp(-t) * std::sin(kPi * x); };
  m.u_tt = m.u;
  m.u_x = [](double x, double t) { return kPi * std::exp(-t) * std::cos(kPi * x); };
  m.u_xx = [](double x, double t) { return -kPi * kPi * std::exp(-t) * std::sin(kPi * x); };
  m.u_xxt = [](double x, double t) { return kPi * kPi * std::exp(-t) * std::sin(kPi * x); };
  return m;
}

ManufacturedSolution oscillating_mode() {
  ManufacturedSolution m;
  m.u = [](double x, double t) { return std::cos(t) * std::sin(kPi * x); };
  m.u_t = [](double x, double t) { return -std::sin(t) * std::sin(kPi * x); };
  m.u_tt = [](double x, double t) { return -std::cos(t) * std::sin(kPi * x); };
  m.u_x = [](double x, double t) { return kPi * std::cos(t) * std::cos(kPi * x); };
  m.u_xx = [](double x, double t) { return -kPi * kPi * std::cos(t) * std::sin(kPi * x); };
  m.u_xxt = [](double x, double t) { return kPi * kPi * std::sin(t) * std::sin(kPi * x); };
  return m;
}

ProblemSpec small_sine(double amp = 0.1) {
  ProblemSpec s;
  s.u0 = [amp](double x) { return amp * std::sin(kPi * x); };
  return s;
}

}  // namespace

TEST_CASE("manufactured forcing of the decaying mode equals u") {
  const auto m = decaying_mode();
  const Forcing f = manufactured_forcing(m, 1.0, 1.0);
  for (double x : {0.2, 0.6})
    for (double t : {0.0, 0.7}) CHECK(f(x, t, 0, 0, 0, 0) == doctest::Approx(m.u(x, t)).epsilon(1e-13));
}

TEST_CASE("decaying mode with the state forcing f = u") {
  // u + u_t vanishes for this solution, so the discrete Laplacian terms cancel and the
  // only error left is the time error.
  ProblemSpec s = manufactured_problem(decaying_mode(), 1.0, 1.0);
  s.forcing = [](double, double, double u, double, double, double) { return u; };
  const auto m = decaying_mode();
  const auto o = convergence_study(s, m, {51, 101, 201}, {0.04, 0.02, 0.01, 0.005}, 1.0);
  CHECK(o.min_time_order() >= 1.8);
  for (double e : o.space_errors) CHECK(e < 1e-8);
  const auto j = joint_refinement_study(s, m, {51, 101, 201}, 0.02, 1.0);
  REQUIRE(j.orders.size() == 2);
  CHECK(j.min_order() >= 1.8);
  CHECK(j.dts[2] == doctest::Approx(0.005));
}

TEST_CASE("oscillating mode: second order in space and time") {
  const auto m = oscillating_mode();
  const ProblemSpec s = manufactured_problem(m, 1.0, 1.0);
  const auto o = convergence_study(s, m, {51, 101, 201}, {0.04, 0.02, 0.01}, 1.0);
  CHECK(o.min_space_order() >= 1.8);
  CHECK(o.min_time_order() >= 1.8);
  CHECK(o.space_errors.back() < 1e-5);
}

TEST_CASE("non-unit coefficients and boundary data") {
  ManufacturedSolution m;
  // u = (1 + x t) + 0.1 sin(pi x) cos t has moving boundary values.
  m.u = [](double x, double t) { return 1 + x * t + 0.1 * std::sin(kPi * x) * std::cos(t); };
  m.u_t = [](double x, double t) { return x - 0.1 * std::sin(kPi * x) * std::sin(t); };
  m.u_tt = [](double x, double t) { return -0.1 * std::sin(kPi * x) * std::cos(t); };
  m.u_x = [](double x, double t) { return t + 0.1 * kPi * std::cos(kPi * x) * std::cos(t); };
  m.u_xx = [](double x, double t) { return -0.1 * kPi * kPi * std::sin(kPi * x) * std::cos(t); };
  m.u_xxt = [](double x, double t) { return 0.1 * kPi * kPi * std::sin(kPi * x) * std::sin(t); };
  const ProblemSpec s = manufactured_problem(m, 0.3, 2.0);
  FDConfig cfg;
  cfg.nx = 101;
  cfg.dt = 1e-3;
  const GridFunction g = solve_fd(s, cfg, 1.0);
  CHECK(boundary_mismatch(g, s) < 1e-13);
  double err = 0;
  for (int i = 0; i < g.nx; ++i) err = std::max(err, std::abs(g.at(g.nt - 1, i) - m.u(g.x(i), 1.0)));
  CHECK(err < 1e-4);
}

TEST_CASE("zero data give the zero solution and problem-P runs keep zero ends") {
  ProblemSpec z;
  FDConfig cfg;
  cfg.nx = 21;
  cfg.dt = 0.01;
  const GridFunction g = solve_fd(z, cfg, 0.5);
  for (double v : g.u) CHECK(v == 0.0);

  ProblemSpec s = small_sine();
  s.forcing = [](double, double, double u, double, double, double ut) { return -std::sin(u) - 0.5 * ut; };
  const GridFunction h = solve_fd(s, cfg, 0.5);
  for (int k = 0; k < h.nt; ++k) {
    CHECK(h.at(k, 0) == 0.0);
    CHECK(h.at(k, h.nx - 1) == 0.0);
  }
}

TEST_CASE("unforced solutions decay") {
  const ProblemSpec s = small_sine(1.0);
  FDConfig cfg;
  cfg.nx = 41;
  cfg.dt = 1e-2;
  const GridFunction g = solve_fd(s, cfg, 3.0);
  // Without forcing the viscous term only removes energy; sample the sup norm every half unit.
  double prev = 1.0;
  for (int k = 50; k < g.nt; k += 50) {
    double sup = 0;
    for (int i = 0; i < g.nx; ++i) sup = std::max(sup, std::abs(g.at(k, i)));
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("explicit scheme: CFL rejection, agreement when stable") {
  const ProblemSpec s = small_sine();
  FDConfig ex;
  ex.scheme = FDScheme::explicit_euler;
  ex.nx = 51;
  ex.dt = 1e-3;  // dx^2 / (2 eps) = 2e-4
  CHECK_THROWS_AS(solve_fd(s, ex, 0.1), InvalidArgument);
  ex.dt = 1e-4;
  const GridFunction a = solve_fd(s, ex, 0.2);
  FDConfig si;
  si.nx = 51;
  si.dt = 1e-4;
  const GridFunction b = solve_fd(s, si, 0.2);
  double gap = 0;
  for (size_t n = 0; n < a.u.size(); ++n) gap = std::max(gap, std::abs(a.u[n] - b.u[n]));
  CHECK(gap < 1e-4);
}

TEST_CASE("runaway growth raises an instability error") {
  ProblemSpec s = small_sine();
  s.forcing = [](double, double, double u, double, double, double) { return 400.0 * u; };
  FDConfig cfg;
  cfg.nx = 21;
  cfg.dt = 1e-3;
  cfg.blowup_factor = 1e3;
  CHECK_THROWS_AS(solve_fd(s, cfg, 5.0), InstabilityError);
}

TEST_CASE("output stride, observer stop and validation") {
  const ProblemSpec s = small_sine();
  FDConfig cfg;
  cfg.nx = 21;
  cfg.dt = 0.01;
  cfg.output_stride = 10;
  const GridFunction g = solve_fd(s, cfg, 1.0);
  CHECK(g.nt == 11);
  CHECK(g.dt == doctest::Approx(0.1));

  int calls = 0;
  march_fd(s, cfg, 0.0, 1.0, [&](double, const std::vector<double>&, const std::vector<double>&) {
    return ++calls < 5;
  });
  CHECK(calls == 5);

  FDConfig bad;
  bad.nx = 3;
  CHECK_THROWS_AS(bad.validate(1.0, 1.0), InvalidArgument);
  bad = {};
  bad.theta_weight = 1.5;
  CHECK_THROWS_AS(bad.validate(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(march_fd(s, cfg, 1.0, 1.0, nullptr), InvalidArgument);
}
