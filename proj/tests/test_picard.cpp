#include <doctest.h>

#include <cmath>

#include "dwl/errors.hpp"
#include "dwl/fd/fd_solver.hpp"
#include "dwl/picard/picard.hpp"

using namespace dwl;

namespace {

const double kPi = std::acos(-1.0);

ProblemSpec damped_sine_gordon() {
  ProblemSpec s;
  s.forcing = [](double, double, double u, double, double, double ut) { return -std::sin(u) - 0.5 * ut; };
  s.u0 = [](double x) { return 0.1 * std::sin(kPi * x); };
  s.u0_x = [](double x) { return 0.1 * kPi * std::cos(kPi * x); };
  s.u0_xx = [](double x) { return -0.1 * kPi * kPi * std::sin(kPi * x); };
  return s;
}

/// sup |u_picard - u_fd| on the Picard levels; the FD step must divide the Picard step.
double sup_gap(const GridFunction& pic, const GridFunction& fd) {
  const int stride = static_cast<int>(std::lround(pic.dt / fd.dt));
  double gap = 0.0;
  for (int k = 0; k < pic.nt; ++k)
    for (int i = 0; i < pic.nx; ++i)
      gap = std::max(gap, std::abs(pic.at(k, i) - fd.at(k * stride, i)));
  return gap;
}

}  // namespace

TEST_CASE("segment length formula") {
  CHECK(step_interval(0.0, 10.0, 4.0, 1.0, 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(step_interval(1.0, 10.0, 4.0, 1.0, 2.0, 0.5) == doctest::Approx(1.125));
  // sqrt(2 rho / M) is the binding term for large M.
  CHECK(step_interval(0.0, 10.0, 0.5, 0.01, 1.0, 1.0) == doctest::Approx(0.02));
  CHECK(step_interval(0.0, 10.0, 0.001, 1.0, 1.0, 1.0) == doctest::Approx(10.0));
  CHECK(step_interval(0.3, 1.0, 0.0, 1.0, 1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(step_interval(2.0, 1.0, 1.0, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("lambda and contraction factor") {
  CHECK(lambda_choice(1.0, 1.0, 1.0, 1.1) == doctest::Approx(6.6));
  CHECK(lambda_choice(0.0, 1.0, 1.0, 1.1) == doctest::Approx(1.1));
  CHECK(lambda_choice(0.1, 2.0, 0.5, 2.0) == doctest::Approx(2.0 * std::max(1.0, 0.1 * (2.5 + 18.0))));
  CHECK_THROWS_AS(lambda_choice(1.0, 1.0, 1.0, 1.0), InvalidArgument);
  const double lam = 6.6;
  const double q = contraction_factor(1.0, lam, 1.0, 1.0);
  CHECK(q == doctest::Approx((1 / lam) * (1 / lam + 3 + 2 / lam)));
  // The chosen lambda always makes the factor smaller than one.
  for (double mu : {0.01, 1.0, 10.0, 100.0})
    for (double eps : {0.2, 1.0, 3.0}) {
      const double l = lambda_choice(mu, 1.0, eps, 1.1);
      CHECK(contraction_factor(mu, l, 1.0, eps) < 1.0);
    }
}

TEST_CASE("weighted norm adds the four weighted sups") {
  GridFunction g(3, 2, 0.5);
  g.ux.assign(g.u.size(), 0.0);
  g.uxx.assign(g.u.size(), 0.0);
  g.at(1, 1) = 2.0;
  g.ut[1] = -1.0;
  g.uxx[4] = 3.0;
  CHECK(weighted_norm(g, 0.0) == doctest::Approx(6.0));
  CHECK(weighted_norm(g, 2.0) == doctest::Approx(2.0 * std::exp(-1.0) + 1.0 + 3.0 * std::exp(-1.0)));
  GridFunction bare(3, 2, 0.5);
  CHECK_THROWS_AS(weighted_norm(bare, 1.0), InvalidArgument);
}

TEST_CASE("configuration validation") {
  PicardConfig c;
  CHECK_NOTHROW(c.validate());
  c.rho = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.lambda_margin = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.nx = 2;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.safety = 0.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("tube check reports the offending component") {
  GridFunction om(5, 3, 0.1);
  om.ux.assign(om.u.size(), 0.0);
  om.uxx.assign(om.u.size(), 0.0);
  GridFunction cand = om;
  CHECK_NOTHROW(PicardOperator::check_tube(om, cand, 0.5));
  cand.ut[2 * 5 + 3] = 0.75;
  try {
    PicardOperator::check_tube(om, cand, 0.5);
    FAIL("expected a tube violation");
  } catch (const TubeViolation& e) {
    CHECK(e.component() == "u_t");
    CHECK(e.x() == doctest::Approx(0.75));
    CHECK(e.t() == doctest::Approx(0.2));
    CHECK(e.excess() == doctest::Approx(0.25));
  }
}

TEST_CASE("unforced problem: one segment and agreement with FD") {
  ProblemSpec s = damped_sine_gordon();
  s.forcing = nullptr;
  PicardConfig cfg;
  cfg.nx = 41;
  cfg.dt = 0.02;
  cfg.horizon = 0.5;
  const PicardResult r = solve_picard(s, cfg);
  REQUIRE(r.segments.size() == 1);
  CHECK(r.segments[0].M == 0.0);
  CHECK(r.segments[0].iterations <= 2);
  FDConfig fc;
  fc.nx = 41;
  fc.dt = 1e-3;
  CHECK(sup_gap(r.solution, solve_fd(s, fc, 0.5)) < 1e-4);
}

TEST_CASE("damped sine-Gordon: Picard agrees with FD and every segment contracts") {
  const ProblemSpec s = damped_sine_gordon();
  PicardConfig cfg;
  cfg.nx = 51;
  cfg.dt = 0.01;
  cfg.horizon = 1.0;
  const PicardResult r = solve_picard(s, cfg);
  CHECK(r.reached == 1.0);
  CHECK(r.segments.size() >= 2);
  CHECK(r.segments.back().b == doctest::Approx(1.0));
  for (const auto& seg : r.segments) {
    CHECK(seg.contraction_bound < 1.0);
    CHECK(seg.max_ratio() < 1.0);
    CHECK(seg.lambda == doctest::Approx(lambda_choice(seg.mu, 1.0, 1.0, cfg.lambda_margin)));
  }
  FDConfig fc;
  fc.nx = 51;
  fc.dt = 1e-3;
  CHECK(sup_gap(r.solution, solve_fd(s, fc, 1.0)) < 1e-4);
}

TEST_CASE("boundary data and a non-unit wave speed are reduced and restored") {
  ProblemSpec s;
  s.epsilon = 0.8;
  s.c = 1.5;
  s.u0 = [](double x) { return 0.2 + 0.1 * x + 0.05 * std::sin(kPi * x); };
  s.h1 = [](double) { return 0.2; };
  s.h2 = [](double) { return 0.3; };
  s.forcing = [](double, double, double u, double, double, double ut) { return -std::sin(u) - 0.2 * ut; };
  PicardConfig cfg;
  cfg.nx = 41;
  cfg.dt = 0.01;
  cfg.horizon = 0.4;
  const PicardResult r = solve_picard(s, cfg);
  CHECK(r.solution.t_end() == doctest::Approx(0.4));
  CHECK(boundary_mismatch(r.solution, s) < 1e-12);
  FDConfig fc;
  fc.nx = 41;
  fc.dt = 1e-3;
  const GridFunction fd = solve_fd(s, fc, 0.4);
  CHECK(sup_gap(r.solution, fd) < 1e-3);
}

TEST_CASE("failure modes") {
  ProblemSpec s = damped_sine_gordon();
  PicardConfig cfg;
  cfg.nx = 21;
  cfg.dt = 0.05;
  cfg.horizon = 0.5;

  SUBCASE("a huge forcing makes the segments shorter than the time step") {
    ProblemSpec big = s;
    big.forcing = [](double, double, double, double, double, double) { return 1e6; };
    CHECK_THROWS_AS(solve_picard(big, cfg), PicardStalled);
  }
  SUBCASE("a single iteration cannot reach the tolerance") {
    cfg.max_iter = 1;
    CHECK_THROWS_AS(solve_picard(s, cfg), NoConvergence);
  }
  SUBCASE("the operator itself needs zero boundary data") {
    ProblemSpec b = s;
    b.h1 = [](double) { return 0.0; };
    CHECK_THROWS_AS(PicardOperator(b, 21, 0.05, 5), InvalidArgument);
  }
}
