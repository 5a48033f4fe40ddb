#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dwl/comparison/comparison.hpp"
#include "dwl/errors.hpp"
#include "dwl/forcing/spike.hpp"
#include "dwl/functionals/constants.hpp"

using namespace dwl;

namespace {

double quadrature(const SpikeFamily& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  std::vector<double> cuts{a};
  for (double x : spike_breakpoints(f, b + 2))
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  double sum = 0;
  for (size_t k = 1; k < cuts.size(); ++k)
    sum += GK::integrate([&](double t) { return spike_value(t, f); }, cuts[k - 1], cuts[k], 0);
  return sum;
}

}  // namespace

TEST_CASE("triangle geometry") {
  const SpikeFamily f{0.1, 1.0, 1.0};
  CHECK(f.gamma_ex() == 0.0);
  CHECK(f.half_base(2) == doctest::Approx(0.25));
  CHECK(f.area(3) == doctest::Approx(0.1));
  CHECK(spike_value(1.0, f) == doctest::Approx(0.2));
  CHECK(spike_value(2.0, f) == doctest::Approx(0.4));
  CHECK(spike_value(1.25, f) == doctest::Approx(0.1));
  CHECK(spike_value(1.6, f) == 0.0);
  CHECK(spike_value(-1.0, f) == 0.0);
  const SpikeFamily g{0.2, 1.5, 1.0};
  CHECK(g.half_base(4) == doctest::Approx(0.0625));
  CHECK(g.area(4) == doctest::Approx(0.2 / 2.0));
}

TEST_CASE("validation of the family") {
  CHECK_THROWS_AS((SpikeFamily{0.0, 1.0, 0.5}.validate()), InvalidArgument);
  CHECK_THROWS_AS((SpikeFamily{0.2, 0.5, 0.2}.validate()), InvalidArgument);
  CHECK_THROWS_AS((SpikeFamily{0.2, 1.0, 1.2}.validate()), InvalidArgument);
  CHECK_THROWS_AS((SpikeFamily{0.2, 2.0, 0.9}.validate()), InvalidArgument);
  CHECK_NOTHROW((SpikeFamily{0.2, 2.0, 1.5}.validate()));
}

TEST_CASE("closed-form integral agrees with adaptive quadrature") {
  for (const SpikeFamily f : {SpikeFamily{0.2, 1.0, 0.6}, SpikeFamily{0.1, 1.0, 1.0}, SpikeFamily{0.2, 1.5, 1.0}}) {
    double worst = 0;
    for (int i = 0; i < 60; ++i) {
      const double a = 0.37 * i, b = a + (i % 7) * 1.3 + 0.2;
      worst = std::max(worst, std::abs(quadrature(f, a, b) - spike_integral(a, b, f)));
    }
    CHECK(worst < 1e-10);
    // Whole triangles contribute their areas.
    CHECK(spike_integral(0.0, 3.5, f) == doctest::Approx(f.area(1) + f.area(2) + f.area(3)).epsilon(1e-13));
  }
}

TEST_CASE("breakpoints are feet and apexes") {
  const SpikeFamily f{0.1, 1.0, 1.0};
  const auto bp = spike_breakpoints(f, 2.5);
  const std::vector<double> expect{0.5, 1.0, 1.5, 1.75, 2.0, 2.25};
  REQUIRE(bp.size() >= expect.size());
  for (size_t k = 0; k < expect.size(); ++k) CHECK(bp[k] == doctest::Approx(expect[k]));
}

TEST_CASE("analytic hypothesis constants pass both scans") {
  const double p = compute_constants(1.0, 1.0, 1.0).p;
  for (const SpikeFamily f : {SpikeFamily{0.2, 1.0, 0.6}, SpikeFamily{0.1, 1.0, 1.0}, SpikeFamily{0.2, 1.5, 1.0}}) {
    const AveragedHypotheses h = spike_hypothesis_constants(f, p);
    const double gm = f.gamma_ex();
    CHECK(h.q == doctest::Approx(f.b0_sq / (1 - gm)));
    CHECK(h.chi == doctest::Approx(1 - gm));
    CHECK(h.kappa == doctest::Approx(1 - gm));
    CHECK(h.M == doctest::Approx(9 * f.b0_sq / (2 * (1 - gm))));
    CHECK(h.sigma == doctest::Approx(f.b0_sq * (2 + std::pow(2.0, 1 - gm) / (1 - gm))));
    CHECK(h.g_at(1.0) == doctest::Approx(spike_value(1.0, f)));
    CHECK(h.integral(7.3) == doctest::Approx(spike_integral(0, 7.3, f)));
    CHECK(verify_hyp_averaged(h, 200.0, 0.01).pass);
    CHECK(verify_hyp_growth(h, 200.0, 0.01).pass);
  }
  CHECK_THROWS_AS(spike_hypothesis_constants(SpikeFamily{0.4, 1.0, 1.0}, p), InvalidArgument);
}
