#include <doctest.h>

#include <cmath>

#include "dwl/comparison/comparison.hpp"
#include "dwl/comparison/ode.hpp"
#include "dwl/errors.hpp"
#include "dwl/forcing/spike.hpp"
#include "dwl/functionals/constants.hpp"

using namespace dwl;

namespace {

AveragedHypotheses plain(double p, double q = 0.0) {
  AveragedHypotheses h;
  h.p = p;
  h.q = q;
  h.M = 1.0;
  h.chi = h.kappa = 1.0;
  return h;
}

}  // namespace

TEST_CASE("Dormand-Prince integrator on closed-form problems") {
  const Trajectory a = integrate_rk45([](double, double y) { return -y; }, 1.0, 0.0, 5.0);
  CHECK(a.final_value() == doctest::Approx(std::exp(-5.0)).epsilon(1e-8));
  CHECK(a.t.back() == 5.0);
  for (size_t k = 1; k < a.t.size(); ++k) CHECK(a.t[k] - a.t[k - 1] <= 0.05 + 1e-15);

  // |t - 1| has a kink; the breakpoint keeps the error at the tolerance level.
  OdeOptions o;
  o.breakpoints = {1.0};
  o.clip_nonnegative = false;
  const Trajectory b = integrate_rk45([](double t, double) { return std::abs(t - 1.0); }, 0.0, 0.0, 2.0, o);
  CHECK(b.final_value() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b.max_value() == doctest::Approx(1.0).epsilon(1e-10));

  OdeOptions tight;
  tight.h_min = 1e-3;
  tight.h_max = 1.0;
  // y' = 1/(1-t)^2 blows up at t = 1; the step collapses before the value overflows.
  auto pole = [](double t, double) { return 1.0 / ((1.0 - t) * (1.0 - t)); };
  CHECK_THROWS_AS(integrate_rk45(pole, 1.0, 0.0, 2.0, tight), StepUnderflow);
}

TEST_CASE("comparison equation: closed-form cases") {
  const AveragedHypotheses h = plain(0.3);
  const Trajectory tr = solve_comparison_ode(h, 1.0, 0.0, 10.0, ComparisonVariant::state_dependent);
  CHECK(std::abs(tr.final_value() - std::exp(-3.0)) < 1e-8);

  AveragedHypotheses g = plain(0.3);
  g.g = [](double) { return 0.1; };
  g.cumulative = [](double t) { return 0.1 * t; };
  CHECK(solve_comparison_ode(g, 2.0, 1.0, 6.0, ComparisonVariant::state_dependent).final_value() ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-8));

  // y' = -p y + 0.06: the solution relaxes to 0.2.
  AveragedHypotheses s = plain(0.3);
  s.g1 = [](double, double) { return 0.06; };
  const double y = solve_comparison_ode(s, 0.0, 0.0, 20.0, ComparisonVariant::frozen, 5.0).final_value();
  CHECK(y == doctest::Approx(0.2 * (1 - std::exp(-6.0))).epsilon(1e-8));
  CHECK_THROWS_AS(solve_comparison_ode(h, -1.0, 0.0, 1.0, ComparisonVariant::frozen), InvalidArgument);
}

TEST_CASE("hypothesis validation") {
  AveragedHypotheses h = plain(0.3, 0.3);
  CHECK_THROWS_AS(h.validate(), InvalidArgument);  // chi = 1 needs q < p
  h = plain(0.3);
  h.xi = 0.1;  // chi <= kappa
  CHECK_THROWS_AS(h.validate(), InvalidArgument);
  h = plain(0.3);
  h.chi = 1.5;
  CHECK_THROWS_AS(h.validate(), InvalidArgument);
  h = plain(0.3);
  h.M = 0.0;
  CHECK_THROWS_AS(h.validate(), InvalidArgument);
}

TEST_CASE("averaged and growth hypotheses") {
  AveragedHypotheses ok = plain(0.3, 0.2);
  ok.g = [](double t) { return 0.2 + 0.2 * std::sin(t); };
  ok.cumulative = [](double t) { return 0.2 * t + 0.2 * (1 - std::cos(t)); };
  ok.sigma = 0.8;
  ok.M = 0.5;
  const AveragedCheck a = verify_hyp_averaged(ok, 50.0, 0.01);
  CHECK(a.pass);
  // sup of 0.2 (cos t0 - cos t) - 0.1 (t - t0) is attained at t0 = asin(1/2) and is below 0.8.
  CHECK(a.sigma_est == doctest::Approx(0.2 * std::sqrt(3.0) - 0.1 * (5 * M_PI / 6 - M_PI / 6)).epsilon(1e-3));
  CHECK(verify_hyp_growth(ok, 50.0, 0.01).pass);

  AveragedHypotheses bad = ok;
  bad.g = [](double) { return 0.5; };
  bad.cumulative = [](double t) { return 0.5 * t; };
  CHECK_FALSE(verify_hyp_averaged(bad, 50.0, 0.01).pass);
  const GrowthCheck gc = verify_hyp_growth(bad, 50.0, 0.01);
  CHECK_FALSE(gc.pass);
  CHECK(gc.max_violation > 0);
}

TEST_CASE("h function") {
  AveragedHypotheses h = plain(0.3, 0.1);
  h.chi = 0.5;
  h.kappa = 0.25;
  h.M = 2.0;
  const double th = 0.2, tau = 4.0;
  CHECK(h_function(h, th, tau) == doctest::Approx(0.3 * 4 - 0.1 * 2 - 2 * 0.2 * (2 - std::sqrt(2.0))));
  const double d = (h_function(h, th, tau + 1e-6) - h_function(h, th, tau - 1e-6)) / 2e-6;
  CHECK(h_derivative(h, th, tau) == doctest::Approx(d).epsilon(1e-6));
}

TEST_CASE("boundedness lemma constants") {
  AveragedHypotheses h = plain(0.3, 0.1);
  h.sigma = 0.5;
  h.M = 0.4;
  const LemmaConstants c = lemma1_constants(h, 2.0);
  CHECK(c.m == doctest::Approx(0.1));
  CHECK(c.theta_v == 0.0);
  CHECK(c.t_tilde == 0.0);
  CHECK(c.beta_tilde == doctest::Approx(2.0 * (std::exp(0.5) + std::exp(0.8) / 0.1 + std::exp(0.8))));
  CHECK(c.s_tilde == 0.0);

  AveragedHypotheses sub = h;
  sub.chi = 0.5;
  sub.kappa = 0.25;
  sub.xi = 0.2;
  const LemmaConstants d = lemma1_constants(sub, 1.0);
  CHECK(d.m == doctest::Approx(0.15));
  CHECK(d.theta_v == doctest::Approx(0.25));
  CHECK(d.t_theta == doctest::Approx(std::pow(3.0, 4.0)));
  CHECK(d.t_tilde == doctest::Approx(std::pow(0.5 * 0.4 / 0.3, 2.0)));

  AveragedHypotheses src = plain(0.3);
  src.g1 = [](double t, double) { return 10.0 * std::exp(-t); };
  src.g2 = [](double t, double) { return std::exp(-t); };
  const LemmaConstants e = lemma1_constants(src, 0.5);
  CHECK(e.s1 == doctest::Approx(std::log(20.0)).epsilon(1e-6));
  CHECK(e.s2 == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(e.s_tilde == e.s1);
}

TEST_CASE("attraction time: empirical value, explicit bound and failure") {
  AveragedHypotheses h = plain(0.3, 0.1);
  h.sigma = 0.2;
  const LemmaConstants c = lemma1_constants(h, 1.0);
  const AttractionResult r = lemma2_attraction_time(h, 0.05, 1.0, c.beta_tilde, 0.0, 200.0);
  CHECK(r.z0.size() == 11);
  CHECK(r.settle_times.front() == 0.0);
  CHECK(std::isfinite(r.T_hat_formula));
  CHECK(r.T_hat_empirical <= r.T_hat_formula);
  // Without g the frozen equation decays like exp(-0.3 t): z0 = 1 needs ln(20)/0.3,
  // reported as the first recorded sample after that (spacing at most h_max = 0.05).
  CHECK(r.T_hat_empirical >= std::log(20.0) / 0.3);
  CHECK(r.T_hat_empirical <= std::log(20.0) / 0.3 + 0.05);
  CHECK_THROWS_AS(lemma2_attraction_time(h, 0.05, 1.0, c.beta_tilde, 0.0, 1.0), NotAttained);

  AveragedHypotheses src = h;
  src.g1 = [](double, double) { return 1e-4; };
  CHECK(std::isnan(lemma2_attraction_time(src, 0.05, 1.0, c.beta_tilde, 0.0, 200.0).T_hat_formula));
}

TEST_CASE("boundedness radius and start time for the spike example") {
  const ConstantsBundle k = compute_constants(1.0, 1.0, 1.0);
  const SpikeFamily fam{0.2, 1.0, 0.6};
  const AveragedHypotheses h = spike_hypothesis_constants(fam, k.p);
  const Theorem1Bounds one = theorem1_wiring(1.0, k, h);
  CHECK(one.s_alpha == doctest::Approx(2.055).epsilon(1e-3));
  CHECK(one.beta_alpha == doctest::Approx(43.56).epsilon(1e-3));
  const Theorem1Bounds half = theorem1_wiring(0.5, k, h);
  CHECK(half.beta_alpha == doctest::Approx(one.beta_alpha / 2).epsilon(1e-12));

  // The state-dependent comparison solution started at alpha~ stays below beta~.
  const Trajectory tr = solve_comparison_ode(h, one.lemma.alpha_tilde, one.s_alpha, 200.0,
                                             ComparisonVariant::state_dependent);
  CHECK(tr.max_value() < one.lemma.beta_tilde);
  CHECK(tr.final_value() < 1e-10);
}
