#include <doctest.h>

#include <cmath>
#include <random>

#include "dwl/errors.hpp"
#include "dwl/fd/fd_solver.hpp"
#include "dwl/functionals/constants.hpp"
#include "dwl/functionals/functionals.hpp"
#include "oracles.hpp"

using namespace dwl;

namespace {

const double kPi = std::acos(-1.0);
const double kPi2 = kPi * kPi;

StatePair sine_state(int nx, double amp, double psi_amp) {
  return StatePair::from_functions(
      nx, [=](double x) { return amp * std::sin(kPi * x); }, [=](double x) { return amp * kPi * std::cos(kPi * x); },
      [=](double x) { return -amp * kPi2 * std::sin(kPi * x); },
      [=](double x) { return psi_amp * std::sin(2 * kPi * x); });
}

}  // namespace

TEST_CASE("omega constants and the unit-parameter bundle") {
  CHECK(omega1() == doctest::Approx(oracle::kOmega1).epsilon(1e-15));
  CHECK(omega2() == doctest::Approx(oracle::kOmega2).epsilon(1e-15));
  CHECK(omega3() == doctest::Approx(oracle::kOmega3).epsilon(1e-15));
  const ConstantsBundle b = compute_constants(1.0, 1.0, 1.0);
  CHECK(b.c2_sq == 1.5);
  CHECK(b.A == 2.5);
  CHECK(b.c1_sq == doctest::Approx(oracle::kC1sq).epsilon(1e-14));
  CHECK(b.c3_sq == doctest::Approx(oracle::kC3sq).epsilon(1e-14));
  CHECK(b.p == doctest::Approx(oracle::kP).epsilon(1e-14));
  CHECK(b.k1p_sq == doctest::Approx(0.125));
  CHECK(b.k3p_sq == doctest::Approx(oracle::kK3psq).epsilon(1e-14));
}

TEST_CASE("growth-dependent constants") {
  CHECK(optimal_lambda_split(1.0, 1.0) == doctest::Approx(oracle::kLambdaK1).epsilon(1e-12));
  const ConstantsBundle b = compute_constants(1.0, oracle::kGammaSG, 1.0);
  CHECK(b.c2_sq == doctest::Approx(oracle::kC2sqSG).epsilon(1e-14));
  CHECK(b.k1_sq == doctest::Approx(oracle::kK1sqSG).epsilon(1e-14));
  CHECK(b.k3_sq == doctest::Approx(oracle::kK3sqK1).epsilon(1e-12));
  // At the optimum both linear branches of k3^2 coincide.
  const double l = b.lambda_split;
  CHECK(3 * (1 - l) * omega1() / 4 == doctest::Approx(3 * l * kPi2 / 4 - 1.0).epsilon(1e-12));
  // Any other split gives a smaller k3^2.
  CHECK(k3_sq_of(1.0, 1.0, l + 0.05) < b.k3_sq);
  CHECK(k3_sq_of(1.0, 1.0, l - 0.05) < b.k3_sq);
  CHECK_THROWS_AS(compute_constants(1.0, 0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(compute_constants(1.0, 1.0, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(optimal_lambda_split(1.0, 3 * kPi2 / 4), InvalidArgument);
  CHECK(c2_sq_of(3.0, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("distances and Lyapunov functionals of a single mode") {
  const StatePair s = sine_state(257, 1.0, 0.0);
  CHECK(distance_d(s) == doctest::Approx(std::sqrt((1 + kPi2 + kPi2 * kPi2) / 2)).epsilon(1e-12));
  CHECK(distance_d1(s) == doctest::Approx(std::sqrt((1 + kPi2) / 2)).epsilon(1e-12));
  CHECK(lyapunov_V(s, 1.0, 1.0) == doctest::Approx(0.5 * (kPi2 * kPi2 / 2 + kPi2)).epsilon(1e-12));
  CHECK(lyapunov_W(s, 1.0, 1.0, PotentialSpec::zero()) == doctest::Approx(lyapunov_V(s, 1.0, 1.0)));
  CHECK(hamiltonian_v(s, PotentialSpec::zero()) == doctest::Approx(kPi2 / 4).epsilon(1e-12));
  // F = -k u: int int_0^phi F = -k/2 int phi^2 = -k/4.
  CHECK(potential_integral(s, PotentialSpec::linear(2.0)) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(lyapunov_W(s, 1.0, 1.0, PotentialSpec::linear(2.0)) ==
        doctest::Approx(lyapunov_V(s, 1.0, 1.0) + 1.0).epsilon(1e-12));
  // int F(phi) phi_xx = int (-2 sin)(-pi^2 sin) = pi^2.
  CHECK(potential_curvature_integral(s, PotentialSpec::linear(2.0)) == doctest::Approx(kPi2).epsilon(1e-10));

  const PoincareRatios r = poincare_check(s);
  CHECK(r.ratio1 == doctest::Approx(kPi2).epsilon(1e-12));
  CHECK(r.ratio2 == doctest::Approx(kPi2).epsilon(1e-12));
  CHECK_FALSE(r.degenerate);
  const PoincareRatios z = poincare_check(sine_state(33, 0.0, 0.0));
  CHECK(z.degenerate);
}

TEST_CASE("potentials and their primitives") {
  const PotentialSpec sg = PotentialSpec::sine_gordon();
  CHECK(sg.value(0.5) == doctest::Approx(-std::sin(0.5)));
  CHECK(sg.derivative(0.0) == doctest::Approx(-1.0));
  CHECK(sg.primitive(0.7) == doctest::Approx(std::cos(0.7) - 1).epsilon(1e-12));
  const PotentialSpec pw = PotentialSpec::power(1.0, 0.5);
  CHECK(pw.value(-0.25) == doctest::Approx(0.5));
  CHECK(pw.primitive(0.25) == doctest::Approx(-std::pow(0.25, 1.5) / 1.5).epsilon(1e-10));
  CHECK(pw.primitive(-0.25) == doctest::Approx(-std::pow(0.25, 1.5) / 1.5).epsilon(1e-10));
  // A potential given only by F falls back to quadrature and differences.
  PotentialSpec bare;
  bare.F = [](double u) { return u - u * u * u; };
  CHECK(bare.primitive(0.5) == doctest::Approx(0.125 - 0.015625).epsilon(1e-10));
  CHECK(bare.derivative(0.5) == doctest::Approx(0.25).epsilon(1e-7));
  PotentialSpec shifted;
  shifted.F = [](double u) { return 1.0 + u; };
  CHECK_THROWS_AS(shifted.validate(), InvalidArgument);
}

TEST_CASE("growth function m and the map B") {
  const PotentialSpec sg = PotentialSpec::sine_gordon();
  CHECK(m_of(sg, 2.0) == doctest::Approx(1.001).epsilon(1e-9));
  CHECK(B_of(sg, 0.5) == doctest::Approx(std::sqrt(2.001) * 0.5).epsilon(1e-9));
  const PotentialSpec cubic{[](double u) { return -u * u * u; }, [](double u) { return -3 * u * u; }, {}};
  // The refinement cells may reach a fraction of a grid step past r, which only errs upward.
  CHECK(m_of(cubic, 2.0) >= 12.0 * 1.001);
  CHECK(m_of(cubic, 2.0) <= 12.0 * 1.001 * (1 + 1e-3));
  CHECK(m_of(cubic, 1.0) <= m_of(cubic, 1.5));
  for (double d : {0.01, 0.3, 1.7}) CHECK(B_inverse(cubic, B_of(cubic, d)) == doctest::Approx(d).epsilon(1e-9));
  CHECK_THROWS_AS(B_inverse(cubic, -1.0), InvalidArgument);
}

TEST_CASE("rate identity for W matches the time derivative along an FD run") {
  const double eps = 1.0, gamma = 2.0, a = 0.5;
  const PotentialSpec pot = PotentialSpec::sine_gordon();
  ProblemSpec s;
  s.epsilon = eps;
  s.u0 = [](double x) { return 0.3 * std::sin(kPi * x) + 0.1 * std::sin(3 * kPi * x); };
  s.u1 = [](double x) { return 0.2 * std::sin(2 * kPi * x); };
  s.forcing = [a](double, double, double u, double, double, double ut) { return -std::sin(u) - a * ut; };
  FDConfig cfg;
  cfg.nx = 401;
  cfg.dt = 1e-4;
  const GridFunction g = solve_fd(s, cfg, 0.3);
  const std::vector<double> damping(cfg.nx, a);
  const double h = g.dt;
  for (int k : {1000, 2000}) {
    const double wp = lyapunov_W(StatePair::from_grid(g, k + 1), gamma, eps, pot);
    const double wm = lyapunov_W(StatePair::from_grid(g, k - 1), gamma, eps, pot);
    const double rate = w_dot_identity(StatePair::from_grid(g, k), gamma, eps, pot, damping);
    CHECK(rate < 0);
    CHECK((wp - wm) / (2 * h) == doctest::Approx(rate).epsilon(2e-3));
  }
}

TEST_CASE("sandwich inequalities on random states") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> coef(0.0, 1.0);
  const int nx = 257;
  for (double eps : {0.5, 1.0, 2.0})
    for (double gamma : {0.75, 1.0, 2.0}) {
      const ConstantsBundle b = compute_constants(eps, gamma, 1.0);
      for (int trial = 0; trial < 20; ++trial) {
        double a[4], c[4];
        for (int n = 0; n < 4; ++n) {
          a[n] = coef(rng) / (1 + n * n);
          c[n] = coef(rng);
        }
        auto sum = [&](int deriv, const double* w) {
          return [=](double x) {
            double v = 0;
            for (int n = 0; n < 4; ++n) {
              const double k = (n + 1) * kPi;
              const double base = deriv == 0 ? std::sin(k * x) : deriv == 1 ? k * std::cos(k * x) : -k * k * std::sin(k * x);
              v += w[n] * base;
            }
            return v;
          };
        };
        const StatePair st = StatePair::from_functions(nx, sum(0, a), sum(1, a), sum(2, a), sum(0, c));
        const double d = distance_d(st);
        const double V = lyapunov_V(st, gamma, eps);
        CHECK(V >= b.c1_sq * d * d * (1 - 1e-12));
        CHECK(V <= b.c2_sq * d * d * (1 + 1e-12));
      }
    }
}
