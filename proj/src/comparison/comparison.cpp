#include "dwl/comparison/comparison.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dwl/errors.hpp"

namespace dwl {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

double running_max(const std::function<double(double, double)>& g, double t, double eta) {
  double best = g(t, 0.0);
  for (int k = 1; k <= 64; ++k) best = std::max(best, g(t, eta * k / 64.0));
  return best;
}

// Cumulative integral of g at every sample time (times must be increasing, starting at >= 0).
std::vector<double> cumulative_on(const AveragedHypotheses& hyp, const std::vector<double>& times) {
  std::vector<double> G(times.size(), 0.0);
  if (times.empty()) return G;
  if (hyp.cumulative) {
    for (size_t k = 0; k < times.size(); ++k) G[k] = hyp.cumulative(times[k]);
    return G;
  }
  G[0] = hyp.integral(times[0]);
  for (size_t k = 1; k < times.size(); ++k)
    G[k] = G[k - 1] + (hyp.g ? GK::integrate(hyp.g, times[k - 1], times[k], 0) : 0.0);
  return G;
}

double pow0(double t, double e) { return std::pow(t, e); }  // pow(0, 0) = 1 as required

// Smallest s on [0, H] such that cond(tau) holds for every sampled tau >= s:
// forward scan with step 0.1, then bisection inside the last failing cell.
double scan_onset(const std::function<bool(double)>& cond, double H) {
  const double step = 0.1;
  const int n = static_cast<int>(std::ceil(H / step));
  int last_bad = -1;
  for (int k = 0; k <= n; ++k)
    if (!cond(std::min(H, k * step))) last_bad = k;
  if (last_bad < 0) return 0.0;
  if (last_bad == n) throw NotAttained("hypothesis scan: condition still fails at the scan horizon");
  double lo = last_bad * step, hi = std::min(H, (last_bad + 1) * step);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cond(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace

void AveragedHypotheses::validate() const {
  if (!(chi >= 0 && chi <= 1 && kappa >= 0 && kappa <= 1))
    throw InvalidArgument("AveragedHypotheses: chi and kappa must lie in [0, 1]");
  if (!(q >= 0)) throw InvalidArgument("AveragedHypotheses: q must be nonnegative");
  if (!(M > 0)) throw InvalidArgument("AveragedHypotheses: M must be positive");
  if (!(p > 0)) throw InvalidArgument("AveragedHypotheses: p must be positive");
  if (!(sigma >= 0)) throw InvalidArgument("AveragedHypotheses: sigma must be nonnegative");
  if (!(xi >= 0)) throw InvalidArgument("AveragedHypotheses: xi must be nonnegative");
  if (chi == 1.0 && q >= p) throw InvalidArgument("AveragedHypotheses: chi = 1 requires q < p");
  if (chi <= kappa && xi != 0.0) throw InvalidArgument("AveragedHypotheses: xi must vanish when chi <= kappa");
}

double AveragedHypotheses::g1_at(double t, double eta) const {
  if (!g1) return 0.0;
  return monotonize ? running_max(g1, t, eta) : g1(t, eta);
}

double AveragedHypotheses::g2_at(double t, double eta) const {
  if (!g2) return 0.0;
  return monotonize ? running_max(g2, t, eta) : g2(t, eta);
}

double AveragedHypotheses::integral(double t) const {
  if (cumulative) return cumulative(t);
  if (!g || t <= 0) return 0.0;
  std::vector<double> cuts{0.0};
  for (double b : breakpoints)
    if (b > 0 && b < t) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(t);
  double sum = 0.0;
  for (size_t k = 1; k < cuts.size(); ++k) sum += GK::integrate(g, cuts[k - 1], cuts[k], 10, 1e-13);
  return sum;
}

std::vector<double> scan_times(const AveragedHypotheses& hyp, double horizon, double step) {
  if (!(horizon > 0 && step > 0)) throw InvalidArgument("scan_times: horizon and step must be positive");
  std::vector<double> ts;
  const long n = static_cast<long>(std::ceil(horizon / step));
  ts.reserve(static_cast<size_t>(n) + 1 + hyp.breakpoints.size());
  for (long k = 0; k <= n; ++k) ts.push_back(std::min(horizon, k * step));
  for (double b : hyp.breakpoints)
    if (b > 0 && b < horizon) ts.push_back(b);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), ts.end());
  return ts;
}

AveragedCheck verify_hyp_averaged(const AveragedHypotheses& hyp, double horizon, double step) {
  const std::vector<double> ts = scan_times(hyp, horizon, step);
  const std::vector<double> G = cumulative_on(hyp, ts);
  // sup_{t >= t0} [G(t) - p t] - [G(t0) - p t0] through a suffix maximum.
  double suffix = -std::numeric_limits<double>::infinity();
  double best = 0.0;
  for (size_t k = ts.size(); k-- > 0;) {
    const double v = G[k] - hyp.p * ts[k];
    suffix = std::max(suffix, v);
    best = std::max(best, suffix - v);
  }
  AveragedCheck out;
  out.sigma_est = best;
  out.sigma_declared = hyp.sigma;
  out.pass = best <= hyp.sigma;
  return out;
}

GrowthCheck verify_hyp_growth(const AveragedHypotheses& hyp, double horizon, double step) {
  const std::vector<double> ts = scan_times(hyp, horizon, step);
  const std::vector<double> G = cumulative_on(hyp, ts);
  GrowthCheck out;
  for (size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    const double lhs = std::abs(G[k] / (1.0 + pow0(t, hyp.chi)) - hyp.q);
    const double rhs = hyp.M / (1.0 + pow0(t, hyp.kappa));
    if (lhs - rhs > out.max_violation) {
      out.max_violation = lhs - rhs;
      out.at_time = t;
    }
    out.max_ratio = std::max(out.max_ratio, lhs / rhs);
  }
  out.pass = out.max_violation < 0.0;
  return out;
}

double h_function(const AveragedHypotheses& hyp, double theta_v, double tau) {
  return hyp.p * tau - hyp.q * pow0(tau, hyp.chi) - hyp.M * theta_v * (pow0(tau, hyp.chi) - pow0(tau, hyp.kappa));
}

double h_derivative(const AveragedHypotheses& hyp, double theta_v, double tau) {
  auto dpow = [tau](double e) { return e == 0.0 ? 0.0 : e * std::pow(tau, e - 1.0); };
  return hyp.p - hyp.q * dpow(hyp.chi) - hyp.M * theta_v * (dpow(hyp.chi) - dpow(hyp.kappa));
}

LemmaConstants lemma1_constants(const AveragedHypotheses& hyp, double alpha_tilde, double scan_horizon) {
  hyp.validate();
  if (!(alpha_tilde >= 0)) throw InvalidArgument("lemma1_constants: alpha~ must be nonnegative");
  LemmaConstants c;
  c.alpha_tilde = alpha_tilde;
  c.m = hyp.chi < 1.0 ? hyp.p / 2.0 : (hyp.p - hyp.q) / 2.0;

  if (hyp.chi <= hyp.kappa) {
    c.theta_v = 0.0;
  } else if (hyp.chi < 1.0) {
    c.theta_v = std::min(1.0, hyp.xi / (2.0 * hyp.M));
  } else {
    c.theta_v = std::min({1.0, (hyp.p - hyp.q) / (2.0 * hyp.M), hyp.xi / (2.0 * hyp.M)});
  }
  if (c.theta_v > 0.0) {
    const double r = (1.0 - c.theta_v) / c.theta_v;
    if (hyp.kappa > 0.0) {
      c.t_theta = std::pow(r, 1.0 / hyp.kappa);
    } else if (r <= 1.0) {
      c.t_theta = 0.0;  // (1 + t^chi) / 2 <= 1 + theta (t^chi - 1) holds for all t once theta >= 1/2
    } else {
      throw InvalidArgument("lemma1_constants: kappa = 0 with theta < 1/2 gives no finite t_theta");
    }
  }
  c.t_tilde = hyp.chi >= 1.0 ? 0.0 : std::pow(hyp.chi * (2.0 * hyp.q + hyp.xi) / hyp.p, 1.0 / (1.0 - hyp.chi));

  const double e2M = std::exp(2.0 * hyp.M);
  c.beta_tilde = alpha_tilde * (std::exp(hyp.sigma) + e2M / c.m + e2M);

  auto weight = [&](double tau) { return std::exp(hyp.xi * (pow0(tau, hyp.chi) - pow0(tau, hyp.kappa))); };
  if (!hyp.g1_zero()) {
    c.s1 = scan_onset([&](double tau) { return hyp.g1_at(tau, c.beta_tilde) * weight(tau) <= alpha_tilde; },
                      scan_horizon);
  }
  if (!hyp.g2_zero()) {
    // Tail integrals over 0.1-wide cells, the scan horizon standing in for infinity.
    const double step = 0.1;
    const int n = static_cast<int>(std::ceil(scan_horizon / step));
    auto integrand = [&](double tau) { return hyp.g2_at(tau, c.beta_tilde) * weight(tau); };
    std::vector<double> tail(n + 2, 0.0);
    for (int k = n; k >= 0; --k) {
      const double a = k * step, b = std::min(scan_horizon, (k + 1) * step);
      tail[k] = tail[k + 1] + (b > a ? GK::integrate(integrand, a, b, 0) : 0.0);
    }
    auto tail_from = [&](double s) {
      const int k = std::min(n, static_cast<int>(s / step));
      const double b = std::min(scan_horizon, (k + 1) * step);
      return tail[k + 1] + (b > s ? GK::integrate(integrand, s, b, 0) : 0.0);
    };
    c.s2 = scan_onset([&](double s) { return tail_from(s) <= alpha_tilde; }, scan_horizon);
  }
  c.s_tilde = std::max({c.t_tilde, c.t_theta, c.s1, c.s2});
  return c;
}

Trajectory solve_comparison_ode(const AveragedHypotheses& hyp, double y0, double t0, double horizon,
                                ComparisonVariant variant, double beta, OdeOptions opts) {
  if (!(y0 >= 0)) throw InvalidArgument("solve_comparison_ode: y0 must be nonnegative");
  if (!(horizon >= t0)) throw InvalidArgument("solve_comparison_ode: horizon precedes t0");
  opts.breakpoints.insert(opts.breakpoints.end(), hyp.breakpoints.begin(), hyp.breakpoints.end());
  ScalarRhs rhs;
  if (variant == ComparisonVariant::state_dependent) {
    rhs = [&hyp](double t, double y) {
      const double yy = std::max(y, 0.0);
      return (hyp.g_at(t) - hyp.p) * y + hyp.g1_at(t, yy) + hyp.g2_at(t, yy);
    };
  } else {
    rhs = [&hyp, beta](double t, double y) {
      return (hyp.g_at(t) - hyp.p) * y + hyp.g1_at(t, beta) + hyp.g2_at(t, beta);
    };
  }
  return integrate_rk45(rhs, y0, t0, horizon, opts);
}

AttractionResult lemma2_attraction_time(const AveragedHypotheses& hyp, double rho_tilde, double alpha_tilde,
                                        double beta_tilde, double t0, double horizon, int fan) {
  hyp.validate();
  if (!(rho_tilde > 0 && alpha_tilde >= 0)) throw InvalidArgument("lemma2_attraction_time: bad radii");
  if (fan < 1) throw InvalidArgument("lemma2_attraction_time: fan must be positive");
  AttractionResult out;
  const double t_end = t0 + horizon;
  for (int j = 0; j < fan; ++j) {
    const double z0 = fan == 1 ? alpha_tilde : alpha_tilde * j / (fan - 1);
    const Trajectory tr = solve_comparison_ode(hyp, z0, t0, t_end, ComparisonVariant::frozen, beta_tilde);
    // First sample after the last one at or above rho~.
    double settle = 0.0;
    for (size_t k = tr.t.size(); k-- > 0;) {
      if (tr.y[k] >= rho_tilde) {
        if (k + 1 == tr.t.size()) throw NotAttained("lemma2_attraction_time: z is still above rho~ at the horizon");
        settle = tr.t[k + 1] - t0;
        break;
      }
    }
    out.z0.push_back(z0);
    out.settle_times.push_back(settle);
    out.T_hat_empirical = std::max(out.T_hat_empirical, settle);
  }

  // Explicit bound for the homogeneous equation with theta = 0: the data term is below
  // rho~/3 once rate (t - t0) exceeds ln(3 alpha~/rho~) + 2M, valid for t0 >= t~.
  const LemmaConstants lc = lemma1_constants(hyp, alpha_tilde);
  if (hyp.g1_zero() && hyp.g2_zero() && lc.theta_v == 0.0 && t0 >= lc.t_tilde) {
    const double rate = hyp.chi < 1.0 ? hyp.p / 2.0 : hyp.p - hyp.q;
    out.T_hat_formula = std::max(0.0, (std::log(3.0 * alpha_tilde / rho_tilde) + 2.0 * hyp.M) / rate);
  }
  return out;
}

Theorem1Bounds theorem1_wiring(double alpha, const ConstantsBundle& constants, const AveragedHypotheses& hyp,
                               double scan_horizon) {
  if (!(alpha >= 0)) throw InvalidArgument("theorem1_wiring: alpha must be nonnegative");
  if (!(constants.c1_sq > 0)) throw InvalidArgument("theorem1_wiring: constants are not populated");
  Theorem1Bounds b;
  b.lemma = lemma1_constants(hyp, alpha * alpha * constants.c2_sq, scan_horizon);
  b.beta_alpha = std::sqrt(b.lemma.beta_tilde / constants.c1_sq);
  b.s_alpha = b.lemma.s_tilde;
  return b;
}

}  // namespace dwl
