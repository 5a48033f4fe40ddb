#include "dwl/scenarios/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dwl/comparison/comparison.hpp"
#include "dwl/errors.hpp"
#include "dwl/fd/fd_solver.hpp"

namespace dwl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string at_time(double t) {
  std::ostringstream os;
  os.precision(6);
  os << "t=" << t;
  return os.str();
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

ProblemSpec decay_problem(const DecayExperimentConfig& cfg, const PotentialSpec& pot, const DampingFn& a,
                          const InitialState& s) {
  ProblemSpec sp;
  sp.epsilon = cfg.epsilon;
  sp.c = 1.0;
  sp.forcing = [pot, a](double x, double t, double u, double ux, double uxx, double ut) {
    return pot.value(u) - a(x, t, u, ux, uxx, ut) * ut;
  };
  const double k0 = s.u0_mode * M_PI, k1 = s.u1_mode * M_PI;
  const double A0 = s.u0_amp, A1 = s.u1_amp;
  sp.u0 = [=](double x) { return A0 * std::sin(k0 * x); };
  sp.u0_x = [=](double x) { return A0 * k0 * std::cos(k0 * x); };
  sp.u0_xx = [=](double x) { return -A0 * k0 * k0 * std::sin(k0 * x); };
  sp.u1 = [=](double x) { return A1 * std::sin(k1 * x); };
  return sp;
}

StatePair initial_pair(const ProblemSpec& sp, int nx) {
  std::vector<double> phi(nx), psi(nx);
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / (nx - 1);
    phi[i] = sp.init_u(x);
    psi[i] = sp.init_ut(x);
  }
  phi.front() = phi.back() = psi.front() = psi.back() = 0.0;
  return StatePair::from_samples(std::move(phi), std::move(psi));
}

// Worst value of a scalar check over a run, with its location.
struct Worst {
  double value = -kInf;
  std::string where;
  void offer(double v, const std::string& w) {
    if (v > value) {
      value = v;
      where = w;
    }
  }
};

}  // namespace

void DecayExperimentConfig::validate() const {
  if (theorem < 2 || theorem > 4) throw InvalidArgument("decay experiment: theorem must be 2, 3 or 4");
  if (!(epsilon > 0)) throw InvalidArgument("decay experiment: epsilon must be positive");
  if (states.empty()) throw InvalidArgument("decay experiment: at least one initial state is required");
  if (!(horizon > 0 && dt > 0 && sample_every >= dt)) throw InvalidArgument("decay experiment: bad time settings");
  if (nx < 5) throw InvalidArgument("decay experiment: nx must be at least 5");
  if (!(slack >= 0 && wdot_tol >= 0)) throw InvalidArgument("decay experiment: tolerances must be nonnegative");
  if (a1 < 0) throw InvalidArgument("decay experiment: a1 must be nonnegative");
  if (theorem == 4 && potential != "power") throw InvalidArgument("decay experiment: theorem 4 needs the power potential");
  if (theorem != 4 && potential == "power") throw InvalidArgument("decay experiment: the power potential needs theorem 4");
  (void)nu_of(epsilon, inf_a);
}

PotentialSpec DecayExperimentConfig::make_potential() const {
  if (potential == "sine_gordon") return PotentialSpec::sine_gordon();
  if (potential == "zero") return PotentialSpec::zero();
  if (potential == "linear") return PotentialSpec::linear(kappa);
  if (potential == "power") return PotentialSpec::power(kappa, tau_pot);
  throw InvalidArgument("decay experiment: unknown potential \"" + potential + "\"");
}

DampingFn DecayExperimentConfig::make_damping() const {
  const double c0 = a0, c1 = a1;
  return [c0, c1](double, double, double u, double, double, double) { return c0 + c1 * u * u; };
}

nlohmann::json DecayExperimentConfig::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : states) st.push_back({{"u0_amp", s.u0_amp}, {"u1_amp", s.u1_amp}, {"u0_mode", s.u0_mode}, {"u1_mode", s.u1_mode}});
  return {{"theorem", theorem}, {"epsilon", epsilon}, {"potential", potential}, {"kappa", kappa},
          {"tau_pot", tau_pot}, {"a0", a0},           {"a1", a1},               {"inf_a", inf_a},
          {"A", A},             {"A_prime", A_prime}, {"tau_A", tau_A},         {"K", K},
          {"states", st},       {"horizon", horizon}, {"nx", nx},               {"dt", dt},
          {"sample_every", sample_every}, {"slack", slack}, {"wdot_tol", wdot_tol}};
}

DecayExperimentConfig DecayExperimentConfig::from_json(const nlohmann::json& j) {
  DecayExperimentConfig c;
  if (j.is_null()) return c;
  static const char* keys[] = {"theorem", "epsilon", "potential", "kappa", "tau_pot", "a0", "a1", "inf_a", "A",
                               "A_prime", "tau_A", "K", "states", "horizon", "nx", "dt", "sample_every", "slack",
                               "wdot_tol"};
  for (const auto& [k, v] : j.items()) {
    if (std::find_if(std::begin(keys), std::end(keys), [&](const char* s) { return k == s; }) == std::end(keys))
      throw InvalidArgument("experiment config: unknown key \"" + k + "\"");
  }
  try {
    c.theorem = j.value("theorem", c.theorem);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.potential = j.value("potential", c.potential);
    c.kappa = j.value("kappa", c.kappa);
    c.tau_pot = j.value("tau_pot", c.tau_pot);
    c.a0 = j.value("a0", c.a0);
    c.a1 = j.value("a1", c.a1);
    c.inf_a = j.value("inf_a", c.a0);
    c.A = j.value("A", c.A);
    c.A_prime = j.value("A_prime", c.A_prime);
    c.tau_A = j.value("tau_A", c.tau_A);
    c.K = j.value("K", c.K);
    if (j.contains("states")) {
      c.states.clear();
      for (const auto& s : j.at("states")) {
        InitialState st;
        st.u0_amp = s.value("u0_amp", st.u0_amp);
        st.u1_amp = s.value("u1_amp", st.u1_amp);
        st.u0_mode = s.value("u0_mode", st.u0_mode);
        st.u1_mode = s.value("u1_mode", st.u1_mode);
        c.states.push_back(st);
      }
    }
    c.horizon = j.value("horizon", c.horizon);
    c.nx = j.value("nx", c.nx);
    c.dt = j.value("dt", c.dt);
    c.sample_every = j.value("sample_every", c.sample_every);
    c.slack = j.value("slack", c.slack);
    c.wdot_tol = j.value("wdot_tol", c.wdot_tol);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

double fit_decay_rate(const std::vector<SeriesRow>& rows, int run, double t_from) {
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& r : rows) {
    if (r.run != run || r.t < t_from || !(r.d > 0)) continue;
    const double y = std::log(r.d);
    n += 1;
    st += r.t;
    sy += y;
    stt += r.t * r.t;
    sty += r.t * y;
  }
  const double den = n * stt - st * st;
  if (n < 2 || den <= 0) return std::nan("");
  return -(n * sty - st * sy) / den;
}

StabilityReport run_decay_experiment(const DecayExperimentConfig& cfg) {
  cfg.validate();
  const PotentialSpec pot = cfg.make_potential();
  const DampingFn damping = cfg.make_damping();

  StabilityReport rep;
  rep.name = "theorem" + std::to_string(cfg.theorem);
  rep.config_echo = cfg.to_json();
  rep.envelope.kind = cfg.theorem == 4 ? "power" : "exponential";

  Thm2Schedule sched;
  sched.epsilon = cfg.epsilon;
  sched.K = cfg.K;
  sched.A = cfg.A;
  sched.A_prime = cfg.A_prime;
  sched.tau = cfg.tau_A;
  sched.inf_a = cfg.inf_a;
  sched.pot = pot;
  const auto A_of_d1 = [&cfg](double s) { return cfg.A * std::pow(s, cfg.tau_A) + cfg.A_prime; };

  FDConfig fd;
  fd.nx = cfg.nx;
  fd.dt = cfg.dt;
  const int stride = std::max(1, static_cast<int>(std::lround(cfg.sample_every / cfg.dt)));

  double worst_d0 = -1.0;
  for (size_t run = 0; run < cfg.states.size(); ++run) {
    const ProblemSpec sp = decay_problem(cfg, pot, damping, cfg.states[run]);
    const StatePair s0 = initial_pair(sp, cfg.nx);
    const double d0 = distance_d(s0);
    if (!(d0 > 0)) throw InvalidArgument("decay experiment: initial states must be nonzero");
    const std::string tag = "run " + std::to_string(run) + ": ";

    // Constants of the claim for this initial state.
    double gamma = 0, D = 0, C = 0, sigma = 0, delta = 0, k3_sq = 0, beta1 = kInf;
    Thm4Constants t4;
    if (cfg.theorem == 2) {
      sigma = sched.sigma_for_delta(1.01 * d0);
      delta = sched.delta(sigma);
      gamma = sched.gamma(sigma);
      D = sched.D(sigma);
      C = sched.C(sigma);
      k3_sq = sched.constants(sigma).k3_sq;
    } else if (cfg.theorem == 3) {
      const Thm3Bounds b = thm3_bounds(1.01 * d0, pot, cfg.epsilon, A_of_d1, cfg.inf_a, cfg.K);
      sigma = b.beta_alpha;
      delta = b.alpha;
      gamma = b.gamma_alpha;
      D = b.D_alpha;
      C = b.C_alpha;
      beta1 = b.beta1;
      k3_sq = b.constants.k3_sq;
    } else {
      t4 = thm4_envelope_constants(cfg.epsilon, cfg.kappa / (1.0 + cfg.tau_pot), cfg.tau_pot, cfg.A, cfg.inf_a);
      gamma = t4.gamma;
      delta = 1.01 * d0;
      sigma = t4.sigma_for_delta(delta);
    }

    std::vector<SeriesRow> rows;
    std::vector<double> wdot_identity;
    Worst inf_a_violation, growth_violation, Fu_violation, curvature_violation;
    int step = 0;
    const double dx = 1.0 / (cfg.nx - 1);
    march_fd(sp, fd, 0.0, cfg.horizon,
             [&](double t, const std::vector<double>& u, const std::vector<double>& ut) {
               if (step++ % stride != 0 && std::abs(t - cfg.horizon) > 0.5 * cfg.dt) return true;
               const StatePair st = StatePair::from_samples(u, ut);
               SeriesRow r;
               r.run = static_cast<int>(run);
               r.t = t;
               r.d = distance_d(st);
               r.d1 = distance_d1(st);
               r.V = lyapunov_V(st, gamma, cfg.epsilon);
               r.W = lyapunov_W(st, gamma, cfg.epsilon, pot);
               r.v_ham = hamiltonian_v(st, pot);
               rows.push_back(r);

               std::vector<double> a(u.size());
               double umin = 0, umax = 0;
               for (size_t i = 0; i < u.size(); ++i) {
                 const double x = i * dx;
                 a[i] = damping(x, t, u[i], st.phi_x[i], st.phi_xx[i], ut[i]);
                 const std::string where = at_time(t) + " x=" + fmt_num(x);
                 inf_a_violation.offer(cfg.inf_a - a[i], where);
                 double bound;
                 if (cfg.theorem == 2) {
                   bound = cfg.A * (cfg.tau_A == 0 ? 1.0 : std::pow(r.d, cfg.tau_A)) + cfg.A_prime;
                 } else if (cfg.theorem == 3) {
                   bound = A_of_d1(r.d1);
                 } else {
                   bound = cfg.A;
                 }
                 growth_violation.offer(std::abs(a[i]) - bound, where);
                 umin = std::min(umin, u[i]);
                 umax = std::max(umax, u[i]);
               }
               if (cfg.theorem != 4) {
                 constexpr int kProbe = 64;
                 for (int q = 0; q <= kProbe; ++q) {
                   const double z = umin + (umax - umin) * q / kProbe;
                   Fu_violation.offer(pot.derivative(z) - cfg.K, at_time(t) + " u=" + fmt_num(z));
                 }
                 wdot_identity.push_back(w_dot_identity(st, gamma, cfg.epsilon, pot, a) + k3_sq * r.d * r.d);
               } else {
                 curvature_violation.offer(-potential_curvature_integral(st, pot), at_time(t));
               }
               return true;
             });

    // Hypotheses along the run.
    rep.verdicts.push_back(make_verdict(tag + "a >= declared inf a on visited states", inf_a_violation.value, 0.0,
                                        1e-12, inf_a_violation.where));
    rep.verdicts.push_back(make_verdict(tag + "|a| within its declared growth bound", growth_violation.value, 0.0,
                                        1e-12, growth_violation.where));
    if (cfg.theorem != 4) {
      rep.verdicts.push_back(make_verdict(tag + "F_u <= K on the visited range", Fu_violation.value, 0.0, 1e-9,
                                          Fu_violation.where));
      rep.verdicts.push_back(make_verdict(tag + "K < 3 pi^2/4", cfg.K, 0.75 * M_PI * M_PI, 0.0));
    } else {
      rep.verdicts.push_back(make_verdict(tag + "int F(u) u_xx >= 0 on visited states", curvature_violation.value,
                                          0.0, 1e-9 * d0 * d0, curvature_violation.where));
    }

    // Monotonicity of W on the sampled series.
    double worst_dw = -kInf, worst_dw_t = 0;
    for (size_t k = 1; k < rows.size(); ++k) {
      const double dw = rows[k].W - rows[k - 1].W;
      if (dw > worst_dw) {
        worst_dw = dw;
        worst_dw_t = rows[k].t;
      }
    }
    const double wscale = std::max(rows.front().W, std::numeric_limits<double>::min());
    rep.verdicts.push_back(make_verdict(tag + "W_gamma is nonincreasing along the run", worst_dw / wscale, 0.0,
                                        cfg.wdot_tol, "largest relative increase at " + at_time(worst_dw_t)));

    double dmax = 0;
    for (const auto& r : rows) dmax = std::max(dmax, r.d);
    rep.verdicts.push_back(make_verdict(tag + "d(t) stays inside the sigma tube", dmax, sigma, 0.0,
                                        "sigma=" + fmt_num(sigma)));

    if (cfg.theorem != 4) {
      double worst = 0, worst_half = 0, worst_t = 0;
      for (const auto& r : rows) {
        const double ratio = r.d / (D * std::exp(-C * r.t) * d0);
        if (ratio > worst) {
          worst = ratio;
          worst_t = r.t;
        }
        worst_half = std::max(worst_half, r.d / (D * std::exp(-0.5 * C * r.t) * d0));
      }
      rep.verdicts.push_back(make_verdict(tag + "d(t) <= D exp(-C t) d(0)", worst, 1.0, cfg.slack,
                                          "D=" + fmt_num(D) + " C=" + fmt_num(C) + " worst at " + at_time(worst_t)));
      rep.verdicts.push_back(make_verdict(tag + "d(t) <= D exp(-C t/2) d(0)", worst_half, 1.0, cfg.slack,
                                          "rate from integrating the differential inequality"));
      double worst_rate = -kInf;
      for (double w : wdot_identity) worst_rate = std::max(worst_rate, w);
      rep.verdicts.push_back(make_verdict(tag + "dW/dt <= -k3^2 d^2 (energy identity)", worst_rate / (d0 * d0), 0.0,
                                          1e-6, "k3^2=" + fmt_num(k3_sq)));
      if (cfg.theorem == 3) {
        double d1max = 0;
        for (const auto& r : rows) d1max = std::max(d1max, r.d1);
        rep.verdicts.push_back(make_verdict(tag + "d1(t) < beta1(alpha)", d1max, beta1, 0.0));
      }
    } else {
      // Crossover: first sample with W at or below the branch-switch value.
      double T_tilde = kInf;
      for (const auto& r : rows) {
        if (r.W <= t4.W_star) {
          T_tilde = r.t;
          break;
        }
      }
      double worst = 0, worst_derived = 0, worst_t = 0;
      for (const auto& r : rows) {
        const double s = r.t - T_tilde;
        if (!(s > 0)) continue;
        const double ratio = r.d * r.d / t4.envelope_d_sq(s);
        if (ratio > worst) {
          worst = ratio;
          worst_t = r.t;
        }
        worst_derived = std::max(worst_derived, r.d * r.d / t4.envelope_d_sq(s, true));
      }
      rep.verdicts.push_back(make_verdict(tag + "crossover time detected", std::isfinite(T_tilde) ? 0.0 : 1.0, 0.0,
                                          0.0, "T~=" + fmt_num(T_tilde) + " W*=" + fmt_num(t4.W_star)));
      rep.verdicts.push_back(make_verdict(tag + "d^2(t) <= power envelope after T~", worst, 1.0, cfg.slack,
                                          "E=" + fmt_num(t4.E) + " worst at " + at_time(worst_t)));
      rep.verdicts.push_back(make_verdict(tag + "d^2(t) <= power envelope with k3'^2", worst_derived, 1.0, cfg.slack,
                                          "E=" + fmt_num(t4.E_derived)));
      if (d0 > worst_d0) rep.envelope.T_tilde = T_tilde;
    }

    if (d0 > worst_d0) {
      worst_d0 = d0;
      Envelope& e = rep.envelope;
      e.sigma = sigma;
      e.delta = delta;
      e.gamma = gamma;
      e.C_fit = fit_decay_rate(rows, static_cast<int>(run), 0.5 * cfg.horizon);
      if (cfg.theorem == 4) {
        e.D = e.C = e.C_proof = std::nan("");
        e.E = t4.E;
        e.E_derived = t4.E_derived;
      } else {
        e.D = D;
        e.C = C;
        e.C_proof = 0.5 * C;
        e.E = e.E_derived = e.T_tilde = std::nan("");
      }
    }
    rep.series.insert(rep.series.end(), rows.begin(), rows.end());
  }
  return rep;
}

void BoundednessConfig::validate() const {
  family.validate();
  if (!(epsilon > 0 && gamma > 0.5)) throw InvalidArgument("boundedness experiment: need eps > 0 and gamma > 1/2");
  if (alphas.empty()) throw InvalidArgument("boundedness experiment: alphas must be nonempty");
  for (double a : alphas)
    if (!(a > 0)) throw InvalidArgument("boundedness experiment: alphas must be positive");
  if (!(duration > 0 && dt > 0 && sample_every >= dt)) throw InvalidArgument("boundedness experiment: bad time settings");
  if (nx < 5) throw InvalidArgument("boundedness experiment: nx must be at least 5");
}

nlohmann::json BoundednessConfig::to_json() const {
  return {{"b0_sq", family.b0_sq}, {"alpha", family.alpha}, {"beta", family.beta},      {"epsilon", epsilon},
          {"gamma", gamma},        {"alphas", alphas},      {"duration", duration},     {"nx", nx},
          {"dt", dt},              {"sample_every", sample_every}, {"slack", slack}, {"scan_horizon", scan_horizon}};
}

BoundednessConfig BoundednessConfig::from_json(const nlohmann::json& j) {
  BoundednessConfig c;
  if (j.is_null()) return c;
  static const char* keys[] = {"b0_sq", "alpha", "beta", "epsilon", "gamma", "alphas", "duration",
                               "nx", "dt", "sample_every", "slack", "scan_horizon", "theorem"};
  for (const auto& [k, v] : j.items()) {
    if (std::find_if(std::begin(keys), std::end(keys), [&](const char* s) { return k == s; }) == std::end(keys))
      throw InvalidArgument("experiment config: unknown key \"" + k + "\"");
  }
  try {
    c.family.b0_sq = j.value("b0_sq", c.family.b0_sq);
    c.family.alpha = j.value("alpha", c.family.alpha);
    c.family.beta = j.value("beta", c.family.beta);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.gamma = j.value("gamma", c.gamma);
    if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
    c.duration = j.value("duration", c.duration);
    c.nx = j.value("nx", c.nx);
    c.dt = j.value("dt", c.dt);
    c.sample_every = j.value("sample_every", c.sample_every);
    c.slack = j.value("slack", c.slack);
    c.scan_horizon = j.value("scan_horizon", c.scan_horizon);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

StabilityReport run_boundedness_experiment(const BoundednessConfig& cfg) {
  cfg.validate();
  const ConstantsBundle k = compute_constants(cfg.epsilon, cfg.gamma);
  const AveragedHypotheses hyp = spike_hypothesis_constants(cfg.family, k.p, cfg.scan_horizon + cfg.duration + 10);
  const SpikeFamily fam = cfg.family;
  const double scale = k.c1_sq / k.A;

  StabilityReport rep;
  rep.name = "theorem1";
  rep.config_echo = cfg.to_json();
  rep.envelope.kind = "bound";
  rep.envelope.D = rep.envelope.C = rep.envelope.C_proof = rep.envelope.E = rep.envelope.E_derived =
      rep.envelope.T_tilde = rep.envelope.C_fit = std::nan("");
  rep.envelope.gamma = cfg.gamma;

  FDConfig fd;
  fd.nx = cfg.nx;
  fd.dt = cfg.dt;
  const int stride = std::max(1, static_cast<int>(std::lround(cfg.sample_every / cfg.dt)));
  const double sin_norm = std::sqrt(0.5 * (1 + M_PI * M_PI + std::pow(M_PI, 4)));

  int run = 0;
  for (double alpha : cfg.alphas) {
    const Theorem1Bounds b = theorem1_wiring(alpha, k, hyp, cfg.scan_horizon);
    rep.envelope.sigma = alpha;
    rep.envelope.delta = b.beta_alpha;
    const double t0 = b.s_alpha;
    // Two states with d(t0) = 0.99 alpha: all displacement, or all velocity.
    const std::vector<std::pair<double, double>> amps{{0.99 * alpha / sin_norm, 0.0},
                                                      {0.0, 0.99 * alpha * std::sqrt(2.0)}};
    for (const auto& [A0, A1] : amps) {
      ProblemSpec sp;
      sp.epsilon = cfg.epsilon;
      sp.forcing = [fam, scale](double, double t, double u, double, double, double) {
        return std::sqrt(scale * spike_value(t, fam)) * std::sin(u);
      };
      sp.u0 = [A0](double x) { return A0 * std::sin(M_PI * x); };
      sp.u0_x = [A0](double x) { return A0 * M_PI * std::cos(M_PI * x); };
      sp.u0_xx = [A0](double x) { return -A0 * M_PI * M_PI * std::sin(M_PI * x); };
      sp.u1 = [A1](double x) { return A1 * std::sin(M_PI * x); };

      std::vector<SeriesRow> rows;
      int step = 0;
      const double t_end = t0 + cfg.duration;
      march_fd(sp, fd, t0, t_end, [&](double t, const std::vector<double>& u, const std::vector<double>& ut) {
        if (step++ % stride != 0 && std::abs(t - t_end) > 0.5 * cfg.dt) return true;
        const StatePair st = StatePair::from_samples(u, ut);
        SeriesRow r;
        r.run = run;
        r.t = t;
        r.d = distance_d(st);
        r.d1 = distance_d1(st);
        r.V = lyapunov_V(st, cfg.gamma, cfg.epsilon);
        r.W = lyapunov_W(st, cfg.gamma, cfg.epsilon, PotentialSpec::zero());
        r.v_ham = hamiltonian_v(st, PotentialSpec::zero());
        rows.push_back(r);
        return true;
      });

      const std::string tag = "alpha " + fmt_num(alpha) + " run " + std::to_string(run) + ": ";
      double dmax = 0;
      for (const auto& r : rows) dmax = std::max(dmax, r.d);
      rep.verdicts.push_back(make_verdict(tag + "d(t0) <= alpha", rows.front().d, alpha, 0.0));
      rep.verdicts.push_back(make_verdict(tag + "d(t) < beta(alpha) for t >= s(alpha)", dmax, b.beta_alpha, 0.0,
                                          "s(alpha)=" + fmt_num(t0) + " beta=" + fmt_num(b.beta_alpha)));
      // y' = (g - p) y has the closed form y0 exp(-p (t - t0) + int_{t0}^t g).
      const double V0 = rows.front().V, G0 = hyp.integral(t0);
      double worst = 0, worst_t = t0;
      for (const auto& r : rows) {
        const double y = V0 * std::exp(-k.p * (r.t - t0) + hyp.integral(r.t) - G0);
        const double ratio = r.V / y;
        if (ratio > worst) {
          worst = ratio;
          worst_t = r.t;
        }
      }
      rep.verdicts.push_back(make_verdict(tag + "V(t) <= comparison solution y(t)", worst, 1.0, cfg.slack,
                                          "worst at " + at_time(worst_t)));
      rep.series.insert(rep.series.end(), rows.begin(), rows.end());
      ++run;
    }
  }
  return rep;
}

}  // namespace dwl

namespace dwl {

void CertifyConfig::validate() const {
  if (epsilons.empty() || gammas.empty()) throw InvalidArgument("certify: epsilons and gammas must be nonempty");
  for (double e : epsilons)
    if (!(e > 0)) throw InvalidArgument("certify: epsilons must be positive");
  for (double g : gammas)
    if (!(g > 0.5)) throw InvalidArgument("certify: gammas must exceed 1/2");
  if (!(K >= 0 && K < 0.75 * M_PI * M_PI)) throw InvalidArgument("certify: K must lie in [0, 3 pi^2/4)");
  if (samples < 1 || nx < 9 || max_modes < 1) throw InvalidArgument("certify: bad sampling settings");
  if (2 * max_modes >= nx - 1) throw InvalidArgument("certify: nx too small for max_modes");
}

nlohmann::json CertifyConfig::to_json() const {
  return {{"epsilons", epsilons}, {"gammas", gammas}, {"K", K}, {"samples", samples},
          {"nx", nx},             {"max_modes", max_modes}, {"seed", seed}};
}

CertifyConfig CertifyConfig::from_json(const nlohmann::json& j) {
  CertifyConfig c;
  if (j.is_null()) return c;
  for (const auto& [k, v] : j.items()) {
    if (k != "epsilons" && k != "gammas" && k != "K" && k != "samples" && k != "nx" && k != "max_modes" && k != "seed")
      throw InvalidArgument("certify config: unknown key \"" + k + "\"");
  }
  try {
    if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
    if (j.contains("gammas")) c.gammas = j.at("gammas").get<std::vector<double>>();
    c.K = j.value("K", c.K);
    c.samples = j.value("samples", c.samples);
    c.nx = j.value("nx", c.nx);
    c.max_modes = j.value("max_modes", c.max_modes);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("certify config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

StatePair random_sine_state(std::mt19937_64& rng, int nx, int max_modes) {
  std::uniform_int_distribution<int> modes(1, max_modes);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 3.0);
  const int n_phi = modes(rng), n_psi = modes(rng);
  std::vector<double> a(n_phi), b(n_psi);
  const double s = scale(rng);
  for (int n = 0; n < n_phi; ++n) a[n] = s * coef(rng) / ((n + 1.0) * (n + 1.0));
  for (int n = 0; n < n_psi; ++n) b[n] = s * coef(rng) / (n + 1.0);
  auto series = [](const std::vector<double>& c, int deriv) {
    return [c, deriv](double x) {
      double sum = 0;
      for (size_t n = 0; n < c.size(); ++n) {
        const double k = (n + 1.0) * M_PI;
        switch (deriv) {
          case 0: sum += c[n] * std::sin(k * x); break;
          case 1: sum += c[n] * k * std::cos(k * x); break;
          default: sum -= c[n] * k * k * std::sin(k * x); break;
        }
      }
      return sum;
    };
  };
  return StatePair::from_functions(nx, series(a, 0), series(a, 1), series(a, 2), series(b, 0));
}

PotentialSpec cubic_potential(double K) {
  PotentialSpec p;
  p.F = [K](double u) { return K * u - u * u * u; };
  p.F_prime = [K](double u) { return K - 3 * u * u; };
  p.antiderivative = [K](double u) { return 0.5 * K * u * u - 0.25 * u * u * u * u; };
  return p;
}

}  // namespace

StabilityReport run_certification(const CertifyConfig& cfg) {
  cfg.validate();
  StabilityReport rep;
  rep.name = "certify";
  rep.config_echo = cfg.to_json();
  rep.envelope.kind = "bound";
  rep.envelope.D = rep.envelope.C = rep.envelope.C_proof = rep.envelope.E = rep.envelope.E_derived =
      rep.envelope.T_tilde = rep.envelope.C_fit = rep.envelope.sigma = rep.envelope.delta = rep.envelope.gamma =
          std::nan("");

  std::vector<std::pair<std::string, PotentialSpec>> pots{{"F = K u - u^3", cubic_potential(cfg.K)}};
  if (cfg.K >= 1.0) pots.emplace_back("F = -sin u", PotentialSpec::sine_gordon());

  std::mt19937_64 rng(cfg.seed);
  std::vector<StatePair> states;
  states.reserve(cfg.samples);
  for (int n = 0; n < cfg.samples; ++n) states.push_back(random_sine_state(rng, cfg.nx, cfg.max_modes));

  const double pi2 = M_PI * M_PI;
  double r1 = kInf, r2 = kInf;
  for (const auto& s : states) {
    const PoincareRatios pr = poincare_check(s);
    if (pr.degenerate) continue;
    r1 = std::min(r1, pr.ratio1);
    r2 = std::min(r2, pr.ratio2);
  }
  rep.verdicts.push_back(make_verdict("Poincare: int phi_x^2 >= pi^2 int phi^2", -r1 / pi2, -1.0, 1e-6,
                                      "smallest ratio " + fmt_num(r1)));
  rep.verdicts.push_back(make_verdict("Poincare: int phi_xx^2 >= pi^2 int phi_x^2", -r2 / pi2, -1.0, 1e-6,
                                      "smallest ratio " + fmt_num(r2)));

  double v_worst = -kInf;
  std::string v_where;
  for (const auto& [pname, pot] : pots) {
    double worst = -kInf;
    for (const auto& s : states) {
      const double d1 = distance_d1(s);
      worst = std::max(worst, (d1 * d1 / 16.0 - hamiltonian_v(s, pot)) / (d1 * d1));
    }
    if (worst > v_worst) {
      v_worst = worst;
      v_where = pname;
    }
  }
  rep.verdicts.push_back(make_verdict("v >= d1^2/16 for F_u <= K", v_worst, 0.0, 1e-12, "worst for " + v_where));

  for (double eps : cfg.epsilons) {
    for (double gamma : cfg.gammas) {
      const ConstantsBundle k = compute_constants(eps, gamma, cfg.K);
      const std::string tag = "eps=" + fmt_num(eps) + " gamma=" + fmt_num(gamma) + ": ";
      rep.verdicts.push_back(make_verdict(tag + "c1^2 <= c2^2", k.c1_sq, k.c2_sq, 0.0));
      double lo = -kInf, hi = -kInf, wlo = -kInf;
      for (const auto& s : states) {
        const double d = distance_d(s), d2 = d * d;
        const double V = lyapunov_V(s, gamma, eps);
        lo = std::max(lo, (k.c1_sq * d2 - V) / d2);
        hi = std::max(hi, (V - k.c2_sq * d2) / d2);
        for (const auto& pp : pots) wlo = std::max(wlo, (k.k1_sq * d2 - lyapunov_W(s, gamma, eps, pp.second)) / d2);
      }
      rep.verdicts.push_back(make_verdict(tag + "c1^2 d^2 <= V", lo, 0.0, 1e-12));
      rep.verdicts.push_back(make_verdict(tag + "V <= c2^2 d^2", hi, 0.0, 1e-12));
      rep.verdicts.push_back(make_verdict(tag + "W_gamma >= k1^2 d^2 for F_u <= K", wlo, 0.0, 1e-12));
    }
  }
  return rep;
}

}  // namespace dwl
