#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dwl/core/config.hpp"
#include "dwl/core/grid.hpp"
#include "dwl/core/problem.hpp"
#include "dwl/errors.hpp"
#include "dwl/fd/fd_solver.hpp"

using namespace dwl;

namespace {

const double kPi = std::acos(-1.0);

ProblemSpec sine_problem(double eps, double c) {
  ProblemSpec s;
  s.epsilon = eps;
  s.c = c;
  s.u0 = [](double x) { return 0.1 * std::sin(kPi * x); };
  s.u1 = [](double x) { return 0.2 * std::sin(2 * kPi * x); };
  s.forcing = [](double, double t, double u, double, double, double ut) { return -std::sin(u) - 0.5 * ut + t; };
  s.horizon = 2.0;
  return s;
}

}  // namespace

TEST_CASE("validate rejects nonpositive parameters and incompatible data") {
  ProblemSpec s = sine_problem(1.0, 1.0);
  CHECK_NOTHROW(s.validate());
  s.epsilon = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.epsilon = 1.0;
  s.c = -1.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.c = 1.0;
  s.h1 = [](double) { return 0.3; };  // u0(0) = 0
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.h1 = [](double t) { return 0.2 * t; };  // h1'(0) = 0.2 but u1(0) = 0
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("rescaling to unit wave speed divides eps by c") {
  const ProblemSpec s = sine_problem(1.0, 2.0);
  const ProblemSpec r = rescale_unit_wavespeed(s);
  CHECK(r.c == 1.0);
  CHECK(r.epsilon == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.transform.time_scale == 2.0);
  CHECK(r.horizon == doctest::Approx(4.0));
  // U_s(x,0) = u1/c and f' = f/c^2 evaluated at original time s/c with u_t = c U_s.
  CHECK(r.init_ut(0.25) == doctest::Approx(s.init_ut(0.25) / 2));
  const double fr = r.f(0.3, 1.0, 0.2, 0.0, 0.0, 0.1);
  const double fo = s.f(0.3, 0.5, 0.2, 0.0, 0.0, 0.2) / 4;
  CHECK(fr == doctest::Approx(fo).epsilon(1e-14));
  // c = 1 is a fixed point.
  CHECK(rescale_unit_wavespeed(r).epsilon == r.epsilon);
}

TEST_CASE("rescaled FD solution maps back onto the original one") {
  ProblemSpec s;
  s.epsilon = 0.4;
  s.c = 2.0;
  s.u0 = [](double x) { return 0.2 * std::sin(kPi * x); };
  s.forcing = [](double, double, double u, double, double, double ut) { return -u - 0.3 * ut; };
  FDConfig cfg;
  cfg.nx = 41;
  cfg.dt = 1e-3;
  const GridFunction direct = solve_fd(s, cfg, 0.5);
  const ProblemSpec r = rescale_unit_wavespeed(s);
  FDConfig scaled = cfg;
  scaled.dt = 2e-3;  // same levels in the new time s = 2 t
  const GridFunction mapped = restore_original(r, solve_fd(r, scaled, 1.0));
  REQUIRE(mapped.nt == direct.nt);
  CHECK(mapped.t_end() == doctest::Approx(0.5));
  double du = 0, dut = 0;
  for (size_t n = 0; n < direct.u.size(); ++n) {
    du = std::max(du, std::abs(direct.u[n] - mapped.u[n]));
    dut = std::max(dut, std::abs(direct.ut[n] - mapped.ut[n]));
  }
  CHECK(du < 1e-5);
  CHECK(dut < 1e-4);
}

TEST_CASE("homogenization removes boundary data and restore adds it back") {
  ProblemSpec s;
  s.u0 = [](double x) { return 1.0 + x + 0.1 * std::sin(kPi * x); };
  s.u1 = [](double x) { return 0.5 * x; };
  s.h1 = [](double) { return 1.0; };
  s.h2 = [](double t) { return 2.0 + 0.5 * t; };
  s.forcing = [](double, double, double u, double, double, double) { return -std::sin(u); };
  CHECK_NOTHROW(s.validate());
  const ProblemSpec h = homogenize_boundaries(s);
  CHECK(h.zero_boundaries());
  CHECK(h.transform.homogenized);
  CHECK(h.init_u(0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(h.init_u(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(h.init_u(0.5) == doctest::Approx(0.1));
  CHECK(h.init_ut(0.7) == doctest::Approx(0.0).epsilon(1e-9));
  // f(v) = f(v + p) - p_tt and p is linear in t here.
  CHECK(h.f(0.5, 1.0, 0.0, 0.0, 0.0, 0.0) == doctest::Approx(-std::sin(1.75)).epsilon(1e-7));
  CHECK_THROWS_AS(homogenize_boundaries(sine_problem(1.0, 2.0)), InvalidArgument);

  FDConfig cfg;
  cfg.nx = 51;
  cfg.dt = 1e-3;
  const GridFunction direct = solve_fd(s, cfg, 0.3);
  const GridFunction back = restore_original(h, solve_fd(h, cfg, 0.3));
  CHECK(boundary_mismatch(back, s) < 1e-6);
  double du = 0;
  for (size_t n = 0; n < direct.u.size(); ++n) du = std::max(du, std::abs(direct.u[n] - back.u[n]));
  CHECK(du < 1e-6);
}

TEST_CASE("normal form composes both reductions") {
  ProblemSpec s = sine_problem(1.0, 2.0);
  s.u0 = [](double x) { return 0.3 + 0.1 * std::sin(kPi * x); };
  s.h1 = s.h2 = [](double) { return 0.3; };
  const ProblemSpec n = reduce_to_normal_form(s);
  CHECK(n.c == 1.0);
  CHECK(n.epsilon == doctest::Approx(0.5));
  CHECK(n.zero_boundaries());
  CHECK(n.transform.time_scale == 2.0);
  CHECK(n.transform.homogenized);
}

TEST_CASE("perturbation problem has a vanishing forcing at zero") {
  ProblemSpec s;
  s.u0 = [](double x) { return 0.1 * std::sin(kPi * x); };
  s.forcing = [](double, double, double u, double, double, double ut) { return -std::sin(u) - 0.5 * ut; };
  FDConfig cfg;
  cfg.nx = 51;
  cfg.dt = 1e-3;
  const GridFunction star = solve_fd(s, cfg, 0.5);
  CHECK(pde_residual(s, star) < 1e-2);
  const ProblemSpec p = perturbation_spec(s, star);
  for (double x : {0.1, 0.5, 0.9})
    for (double t : {0.0, 0.2, 0.45}) CHECK(std::abs(p.f(x, t, 0, 0, 0, 0)) < 1e-14);
  CHECK(p.init_u(0.3) == doctest::Approx(0.0).epsilon(1e-12));

  GridFunction bad = star;
  for (double& v : bad.u) v += 0.5 * v * v + 0.01;
  CHECK_THROWS_AS(perturbation_spec(s, bad, 1e-2), InvalidArgument);
  GridFunction no_ut = star;
  no_ut.ut.clear();
  CHECK_THROWS_AS(perturbation_spec(s, no_ut), InvalidArgument);
}

TEST_CASE("grid stencils and quadrature") {
  const int n = 201;
  std::vector<double> f(n);
  const double dx = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) f[i] = std::sin(kPi * i * dx);
  const auto d1 = diff1(f, dx);
  const auto d2 = diff2(f, dx);
  for (int i : {0, 50, 100, 200}) {
    CHECK(d1[i] == doctest::Approx(kPi * std::cos(kPi * i * dx)).epsilon(1e-3));
    CHECK(d2[i] == doctest::Approx(-kPi * kPi * std::sin(kPi * i * dx)).epsilon(2e-3).scale(1));
  }
  CHECK(trapezoid(f, dx) == doctest::Approx(2 / kPi).epsilon(1e-4));
}

TEST_CASE("grid CSV round trip and interpolation") {
  GridFunction g(5, 4, 0.1, 0.2);
  for (int k = 0; k < g.nt; ++k)
    for (int i = 0; i < g.nx; ++i) {
      g.at(k, i) = g.x(i) + 10 * g.t(k);
      g.ut[static_cast<size_t>(k) * g.nx + i] = 0.125 * k - i;
    }
  std::stringstream ss;
  write_grid_csv(ss, g);
  const GridFunction h = read_grid_csv(ss);
  CHECK(h.nx == g.nx);
  CHECK(h.nt == g.nt);
  CHECK(h.dt == doctest::Approx(g.dt));
  CHECK(h.t0 == doctest::Approx(g.t0));
  CHECK(h.u == g.u);
  CHECK(h.ut == g.ut);
  // u is bilinear in (x, t), so interpolation is exact.
  CHECK(g.interpolate(g.u, 0.33, 0.27) == doctest::Approx(0.33 + 2.7));
  std::stringstream broken("x,t,u\n0,0,1\n");
  CHECK_THROWS_AS(read_grid_csv(broken), InvalidArgument);
}

TEST_CASE("state pairs validate the boundary condition") {
  auto s = StatePair::from_functions(
      33, [](double x) { return std::sin(kPi * x); }, [](double x) { return kPi * std::cos(kPi * x); },
      [](double x) { return -kPi * kPi * std::sin(kPi * x); }, [](double) { return 0.0; });
  CHECK_NOTHROW(s.validate());
  s.phi[0] = 0.1;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.problem_p = false;
  CHECK_NOTHROW(s.validate());
  s.psi.pop_back();
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("problem configuration from JSON") {
  const Json j = Json::parse(R"({
    "epsilon": 0.5, "c": 2, "horizon": 3,
    "forcing": {"type": "sine_gordon", "a": 0.5, "b": 1},
    "u0": {"type": "sine", "amplitude": 0.1, "mode": 2},
    "u1": {"type": "zero"}
  })");
  const ProblemSpec s = problem_from_json(j);
  CHECK(s.epsilon == 0.5);
  CHECK(s.c == 2.0);
  CHECK(s.horizon == 3.0);
  CHECK(s.init_u(0.25) == doctest::Approx(0.1));
  CHECK(s.f(0.3, 0.0, 0.2, 0, 0, 0.4) == doctest::Approx(-std::sin(0.2) - 0.2));

  const Json lin = Json::parse(R"({"u0": {"type": "linear", "left": 1, "right": 2},
    "h1": {"type": "constant", "value": 1}, "h2": {"type": "ramp", "value": 2, "rate": 0}})");
  const ProblemSpec l = problem_from_json(lin);
  CHECK(l.init_u(0.5) == doctest::Approx(1.5));
  CHECK(l.right(3.0) == doctest::Approx(2.0));

  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"forcing": {"type": "nope"}})")), InvalidArgument);
  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"epsilon": 1, "typo": 2})")), InvalidArgument);
  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"epsilon": -1})")), InvalidArgument);
  // Incompatible corners: u0(0) = 1 while h1 = 0.
  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"u0": {"type": "linear", "left": 1, "right": 0}})")),
                  InvalidArgument);

  const FDConfig fd = fd_config_from_json(Json::parse(R"({"nx": 51, "dt": 0.001, "scheme": "explicit_euler"})"));
  CHECK(fd.nx == 51);
  CHECK(fd.scheme == FDScheme::explicit_euler);
  CHECK_THROWS_AS(fd_config_from_json(Json::parse(R"({"scheme": "leapfrog"})")), InvalidArgument);
  const PicardConfig pc = picard_config_from_json(Json::parse(R"({"rho": 0.5, "nx": 41})"));
  CHECK(pc.rho == 0.5);
  CHECK(std::isnan(pc.lipschitz_mu));
  CHECK_THROWS_AS(picard_config_from_json(Json::parse(R"({"rho": -1})")), InvalidArgument);
}
