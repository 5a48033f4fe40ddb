// Command line front end. Every subcommand writes <out>/<name>_report.json (verdicts and
// config echo) and <out>/<name>_series.csv, plus its own data files, and prints one line
// per verdict. Exit status: 0 all verdicts pass, 2 some verdict fails, 1 runtime error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "dwl/comparison/comparison.hpp"
#include "dwl/core/config.hpp"
#include "dwl/core/grid.hpp"
#include "dwl/errors.hpp"
#include "dwl/fd/fd_solver.hpp"
#include "dwl/forcing/spike.hpp"
#include "dwl/functionals/constants.hpp"
#include "dwl/functionals/functionals.hpp"
#include "dwl/kernels/kernels.hpp"
#include "dwl/picard/picard.hpp"
#include "dwl/scenarios/experiments.hpp"
#include "dwl/scenarios/report.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fs = std::filesystem;
using namespace dwl;

namespace {

struct Options {
  std::string config;
  std::string out = "dwl_out";
  std::string trace;
};

Json load(const Options& o) { return o.config.empty() ? Json::object() : load_config_file(o.config); }

Json section(const Json& j, const char* key) { return j.contains(key) ? j.at(key) : Json::object(); }

std::ofstream open_out(const Options& o, const std::string& file) {
  fs::create_directories(o.out);
  std::ofstream f(fs::path(o.out) / file);
  if (!f) throw Error("cannot write " + (fs::path(o.out) / file).string());
  f.precision(17);
  return f;
}

StabilityReport blank_report(const std::string& name, const Json& echo) {
  StabilityReport r;
  r.name = name;
  r.config_echo = echo;
  r.envelope.kind = "bound";
  auto& e = r.envelope;
  e.D = e.C = e.C_proof = e.E = e.E_derived = e.T_tilde = e.C_fit = e.sigma = e.delta = e.gamma = std::nan("");
  return r;
}

int finish(const StabilityReport& r, const Options& o) {
  const ReportFiles files = emit_report(r, o.out);
  for (const auto& v : r.verdicts) {
    std::cout << (v.pass ? "PASS  " : "FAIL  ") << v.claim << "  (margin " << v.margin << ", tol " << v.tolerance
              << (v.detail.empty() ? "" : ", " + v.detail) << ")\n";
  }
  std::cout << "report: " << files.verdict_json << "\n";
  return r.all_pass() ? 0 : 2;
}

int cmd_solve(const Options& o) {
  const Json cfg = load(o);
  const ProblemSpec spec = problem_from_json(section(cfg, "problem"));
  const std::string solver = cfg.value("solver", std::string("fd"));
  StabilityReport rep = blank_report("solve", cfg);
  GridFunction g;
  if (solver == "fd") {
    const FDConfig fd = fd_config_from_json(section(cfg, "fd"));
    g = solve_fd(spec, fd, spec.horizon);
    rep.verdicts.push_back(make_verdict("boundary columns match h1, h2", boundary_mismatch(g, spec), 0.0, 1e-9));
  } else if (solver == "picard") {
    Json pj = section(cfg, "picard");
    if (pj.is_null()) pj = Json::object();
    if (!pj.contains("horizon")) pj["horizon"] = spec.horizon;
    const PicardConfig pc = picard_config_from_json(pj);
    const PicardResult res = solve_picard(spec, pc);
    g = res.solution;
    auto seg = open_out(o, "picard_segments.csv");
    seg << "a,b,M,mu,lambda,iterations,final_residual,contraction_bound,max_ratio\n";
    for (size_t k = 0; k < res.segments.size(); ++k) {
      const auto& s = res.segments[k];
      seg << s.a << ',' << s.b << ',' << s.M << ',' << s.mu << ',' << s.lambda << ',' << s.iterations << ','
          << s.final_residual << ',' << s.contraction_bound << ',' << s.max_ratio() << '\n';
      const std::string tag = "segment [" + std::to_string(s.a) + ", " + std::to_string(s.b) + "]: ";
      rep.verdicts.push_back(make_verdict(tag + "observed contraction ratio < 1", s.max_ratio(), 1.0, 0.0));
      rep.verdicts.push_back(make_verdict(tag + "contraction estimate < 1", s.contraction_bound, 1.0, 0.0));
    }
  } else {
    throw InvalidArgument("solve: solver must be \"fd\" or \"picard\"");
  }
  fs::create_directories(o.out);
  write_grid_csv((fs::path(o.out) / "solution.csv").string(), g);
  return finish(rep, o);
}

int cmd_kernel_table(const Options& o) {
  const Json cfg = load(o);
  const Json k = section(cfg, "kernel");
  KernelParams p;
  p.epsilon = k.value("epsilon", 1.0);
  p.c = k.value("c", 1.0);
  p.backend = k.value("backend", std::string("spectral")) == "quadrature" ? KernelBackend::quadrature
                                                                          : KernelBackend::spectral;
  p.validate();
  const int nxp = k.value("x_points", 10), nsp = k.value("s_points", 10);
  const double s_min = k.value("s_min", 0.05), s_max = k.value("s_max", 2.0);
  if (nxp < 1 || nsp < 2 || !(s_min > 0 && s_max > s_min)) throw InvalidArgument("kernel-table: bad sample grid");

  // w, w_t, w_x and w_xx in kernel_table.csv are taken at one source point xi.
  const double xi = k.value("xi", 0.5);
  if (!(xi > 0 && xi < 1)) throw InvalidArgument("kernel-table: xi must lie in (0, 1)");

  StabilityReport rep = blank_report("kernel_table", cfg);
  auto csv = open_out(o, "kernel_bounds.csv");
  csv << "x,s,check,value,bound,tolerance,pass\n";
  auto tab = open_out(o, "kernel_table.csv");
  tab << "x,s,K,theta,w,w_t,w_x,w_xx,err\n";
  KernelParams quad = p;
  quad.backend = KernelBackend::quadrature;
  std::map<std::string, std::pair<double, std::string>> worst;  // claim -> (worst excess, where)
  double worst_res = 0.0;
  for (int i = 0; i < nxp; ++i) {
    const double x = (i + 1.0) / (nxp + 1.0);
    for (int j = 0; j < nsp; ++j) {
      const double s = s_min + (s_max - s_min) * j / (nsp - 1);
      const BoundReport br = verify_kernel_bounds(x, s, p);
      // K has no spectral form, so it always comes from the nested quadrature.
      const KernelEval K = fundamental_k(x, s, quad), th = theta(x, s, p), w = green_w(x, xi, s, p);
      const KernelEval wt = green_w_derivative(x, xi, s, p, WDerivative::t);
      const KernelEval wx = green_w_derivative(x, xi, s, p, WDerivative::x);
      const KernelEval wxx = green_w_derivative(x, xi, s, p, WDerivative::xx);
      const double err =
          std::max({K.est_error, th.est_error, w.est_error, wt.est_error, wx.est_error, wxx.est_error});
      tab << x << ',' << s << ',' << K.value << ',' << th.value << ',' << w.value << ',' << wt.value << ','
          << wx.value << ',' << wxx.value << ',' << err << '\n';
      for (const auto& c : br.checks) {
        csv << x << ',' << s << ',' << c.name << ',' << c.value << ',' << c.bound << ',' << c.tolerance << ','
            << (c.pass() ? 1 : 0) << '\n';
        const double excess = c.value - c.bound - c.tolerance;
        auto it = worst.find(c.name);
        if (it == worst.end() || excess > it->second.first)
          worst[c.name] = {excess, "x=" + std::to_string(x) + " s=" + std::to_string(s)};
      }
      double res = 0.0;
      if (p.backend == KernelBackend::spectral) {
        const ThetaJet jt = SpectralTheta(p.epsilon, p.c)(x, s);
        res = -p.epsilon * jt.xxt - p.c * p.c * jt.xx + jt.tt;
      } else {
        res = theta_operator_residual(x, s, p).value;
      }
      worst_res = std::max(worst_res, std::abs(res));
    }
  }
  for (const auto& [name, w] : worst)
    rep.verdicts.push_back(make_verdict(name + " on the sample grid", w.first, 0.0, 0.0, "worst at " + w.second));
  rep.verdicts.push_back(make_verdict("|L theta| < 1e-3 at interior samples", worst_res, 1e-3, 0.0));

  if (k.contains("table")) {
    const Json t = k.at("table");
    const KernelTable table(p.epsilon, p.c, t.value("nx", 11), t.value("dt", 0.1), t.value("lags", 10));
    auto tc = open_out(o, "theta_table.csv");
    tc << "lag,s,offset,y,theta,theta_t,theta_x,theta_xx\n";
    const double dy = 1.0 / (table.nx() - 1);
    for (int l = 0; l <= table.lags(); ++l)
      for (int off = 0; off < table.offsets(); ++off) {
        const ThetaJet& jt = table.at(l, off);
        tc << l << ',' << l * table.dt() << ',' << off << ',' << off * dy << ',' << jt.v << ',' << jt.t << ','
           << jt.x << ',' << jt.xx << '\n';
      }
  }
  return finish(rep, o);
}

AveragedHypotheses spike_hyp_from(const Json& j, double p, double horizon, SpikeFamily* fam_out) {
  SpikeFamily fam;
  fam.b0_sq = j.value("b0_sq", fam.b0_sq);
  fam.alpha = j.value("alpha", fam.alpha);
  fam.beta = j.value("beta", fam.beta);
  if (fam_out) *fam_out = fam;
  return spike_hypothesis_constants(fam, p, horizon);
}

int cmd_lemma(const Options& o) {
  const Json cfg = load(o);
  const Json l = section(cfg, "lemma");
  const double eps = l.value("epsilon", 1.0), gamma = l.value("gamma", 1.0);
  const double alpha_tilde = l.value("alpha_tilde", 1.5), rho_tilde = l.value("rho_tilde", 0.1);
  const double horizon = l.value("horizon", 100.0), scan = l.value("scan_horizon", 200.0);
  const ConstantsBundle k = compute_constants(eps, gamma);
  const AveragedHypotheses hyp = spike_hyp_from(l, k.p, scan + horizon + 10, nullptr);
  LemmaConstants lc = lemma1_constants(hyp, alpha_tilde, scan);

  StabilityReport rep = blank_report("lemma", cfg);
  const double t0 = lc.s_tilde;
  auto csv = open_out(o, "comparison.csv");
  csv << "z0,t,y\n";
  double ymax = 0.0;
  for (int j = 0; j <= 10; ++j) {
    const double y0 = alpha_tilde * j / 10.0;
    const Trajectory tr = solve_comparison_ode(hyp, y0, t0, t0 + horizon, ComparisonVariant::state_dependent);
    for (size_t n = 0; n < tr.t.size(); ++n) csv << y0 << ',' << tr.t[n] << ',' << tr.y[n] << '\n';
    ymax = std::max(ymax, tr.max_value());
  }
  rep.verdicts.push_back(make_verdict("y(t) < beta~ from y(t0) <= alpha~, t0 = s~", ymax, lc.beta_tilde, 0.0));
  const AttractionResult ar = lemma2_attraction_time(hyp, rho_tilde, alpha_tilde, lc.beta_tilde, t0, horizon);
  lc.T_hat = ar.T_hat_empirical;
  if (std::isfinite(ar.T_hat_formula)) {
    rep.verdicts.push_back(make_verdict("z(t) < rho~ after the explicit T^", ar.T_hat_empirical, ar.T_hat_formula,
                                        0.0, "empirical " + std::to_string(ar.T_hat_empirical)));
  }
  rep.config_echo["derived"] = {{"m", lc.m},           {"theta", lc.theta_v},        {"t_theta", lc.t_theta},
                                {"t_tilde", lc.t_tilde}, {"beta_tilde", lc.beta_tilde}, {"s1", lc.s1},
                                {"s2", lc.s2},         {"s_tilde", lc.s_tilde},      {"T_hat_empirical", ar.T_hat_empirical},
                                {"T_hat_formula", std::isfinite(ar.T_hat_formula) ? Json(ar.T_hat_formula) : Json()},
                                {"p", k.p},            {"c1_sq", k.c1_sq},           {"c2_sq", k.c2_sq}};
  return finish(rep, o);
}

int cmd_spike(const Options& o) {
  const Json cfg = load(o);
  const Json s = section(cfg, "spike");
  const double horizon = s.value("horizon", 200.0), step = s.value("step", 0.01);
  const double p = s.value("p", compute_constants(1.0, 1.0).p);
  SpikeFamily fam;
  const AveragedHypotheses hyp = spike_hyp_from(s, p, horizon + 2, &fam);
  StabilityReport rep = blank_report("spike", cfg);
  const AveragedCheck av = verify_hyp_averaged(hyp, horizon, step);
  rep.verdicts.push_back(make_verdict("averaged bound with the declared sigma", av.sigma_est, av.sigma_declared, 0.0));
  const GrowthCheck gr = verify_hyp_growth(hyp, horizon, step);
  rep.verdicts.push_back(make_verdict("growth bound with the declared q, chi, kappa, M", gr.max_violation, 0.0, 0.0,
                                      "worst at t=" + std::to_string(gr.at_time)));
  // Closed-form primitive against Gauss-Kronrod on each piece.
  double worst = 0.0;
  const auto bps = spike_breakpoints(fam, horizon);
  double prev = 0.0, acc = 0.0;
  for (double b : bps) {
    if (b > horizon) break;
    if (b <= prev) continue;
    acc += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double t) { return spike_value(t, fam); }, prev, b, 0, 1e-13);
    worst = std::max(worst, std::abs(acc - spike_integral(0.0, b, fam)));
    prev = b;
  }
  rep.verdicts.push_back(make_verdict("closed-form integral matches quadrature", worst, 1e-10, 0.0));
  auto csv = open_out(o, "spike.csv");
  csv << "t,b2,integral\n";
  for (double t = 0.0; t <= std::min(horizon, 20.0) + 1e-12; t += step)
    csv << t << ',' << spike_value(t, fam) << ',' << spike_integral(0.0, t, fam) << '\n';
  rep.config_echo["derived"] = {{"q", hyp.q}, {"chi", hyp.chi}, {"kappa", hyp.kappa}, {"M", hyp.M},
                                {"sigma", hyp.sigma}, {"sigma_est", av.sigma_est}, {"growth_ratio", gr.max_ratio}};
  return finish(rep, o);
}

int cmd_certify(const Options& o) {
  const Json cfg = load(o);
  const CertifyConfig cc = CertifyConfig::from_json(section(cfg, "certify"));
  StabilityReport rep = run_certification(cc);
  Json consts = Json::array();
  for (double e : cc.epsilons)
    for (double g : cc.gammas) {
      const ConstantsBundle k = compute_constants(e, g, cc.K);
      consts.push_back({{"epsilon", e}, {"gamma", g}, {"c1_sq", k.c1_sq}, {"c2_sq", k.c2_sq}, {"c3_sq", k.c3_sq},
                        {"A", k.A}, {"p", k.p}, {"k1_sq", k.k1_sq}, {"k3_sq", k.k3_sq}, {"k1p_sq", k.k1p_sq},
                        {"k3p_sq", k.k3p_sq}, {"lambda_split", k.lambda_split}});
    }
  rep.config_echo["constants"] = consts;
  rep.config_echo["omega"] = {omega1(), omega2(), omega3()};
  return finish(rep, o);
}

int cmd_experiment(const Options& o) {
  const Json cfg = load(o);
  const Json e = section(cfg, "experiment");
  const int theorem = e.is_object() ? e.value("theorem", 2) : 2;
  StabilityReport rep = theorem == 1 ? run_boundedness_experiment(BoundednessConfig::from_json(e))
                                     : run_decay_experiment(DecayExperimentConfig::from_json(e));
  const auto& env = rep.envelope;
  std::cout << "envelope " << env.kind << ": D=" << env.D << " C=" << env.C << " C_proof=" << env.C_proof
            << " C_fit=" << env.C_fit << " E=" << env.E << " E_derived=" << env.E_derived << " T~=" << env.T_tilde
            << "\n";
  return finish(rep, o);
}

int cmd_functionals(const Options& o) {
  if (o.trace.empty()) throw InvalidArgument("functionals: --trace is required");
  const Json cfg = load(o);
  const Json f = section(cfg, "functionals");
  const double gamma = f.value("gamma", 1.0), eps = f.value("epsilon", 1.0);
  const std::string pname = f.value("potential", std::string("sine_gordon"));
  PotentialSpec pot;
  if (pname == "sine_gordon") {
    pot = PotentialSpec::sine_gordon();
  } else if (pname == "zero") {
    pot = PotentialSpec::zero();
  } else if (pname == "linear") {
    pot = PotentialSpec::linear(f.value("kappa", 1.0));
  } else if (pname == "power") {
    pot = PotentialSpec::power(f.value("kappa", 1.0), f.value("tau", 0.5));
  } else {
    throw InvalidArgument("functionals: unknown potential \"" + pname + "\"");
  }
  const GridFunction g = read_grid_csv(o.trace);
  StabilityReport rep = blank_report("functionals", cfg);
  auto csv = open_out(o, "trace_functionals.csv");
  csv << "x,t,u,ut,d,d1,V,W,v_ham\n";
  for (int k = 0; k < g.nt; ++k) {
    const StatePair st = StatePair::from_grid(g, k, false);
    SeriesRow r;
    r.t = g.t(k);
    r.d = distance_d(st);
    r.d1 = distance_d1(st);
    r.V = lyapunov_V(st, gamma, eps);
    r.W = lyapunov_W(st, gamma, eps, pot);
    r.v_ham = hamiltonian_v(st, pot);
    rep.series.push_back(r);
    for (int i = 0; i < g.nx; ++i) {
      csv << g.x(i) << ',' << r.t << ',' << st.phi[i] << ',' << st.psi[i] << ',' << r.d << ',' << r.d1 << ','
          << r.V << ',' << r.W << ',' << r.v_ham << '\n';
    }
  }
  return finish(rep, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability toolkit for the viscous wave equation -eps u_xxt - c^2 u_xx + u_tt = f"};
  app.require_subcommand(1);
  Options opt;
  auto add = [&](const char* name, const char* help) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--config", opt.config, "JSON configuration file")->check(CLI::ExistingFile);
    sc->add_option("--out", opt.out, "output directory");
    return sc;
  };
  auto* solve = add("solve", "solve a problem by finite differences or Picard iteration");
  auto* ktab = add("kernel-table", "check the Green's function bounds and tabulate theta");
  auto* lemma = add("lemma", "boundedness and attraction constants of the comparison equation");
  auto* spike = add("spike", "verify the hypotheses for a triangle-spike forcing");
  auto* cert = add("certify", "certify the energy constants on random states");
  auto* exper = add("experiment", "run a decay or boundedness experiment");
  auto* func = add("functionals", "append d, d1, V, W, v to a solution trace");
  func->add_option("--trace", opt.trace, "solution CSV with header x,t,u,ut")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (ktab->parsed()) return cmd_kernel_table(opt);
    if (lemma->parsed()) return cmd_lemma(opt);
    if (spike->parsed()) return cmd_spike(opt);
    if (cert->parsed()) return cmd_certify(opt);
    if (exper->parsed()) return cmd_experiment(opt);
    if (func->parsed()) return cmd_functionals(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
