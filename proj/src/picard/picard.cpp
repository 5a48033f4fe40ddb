#include "dwl/picard/picard.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "dwl/errors.hpp"

namespace dwl {

void PicardConfig::validate() const {
  if (!(rho > 0)) throw InvalidArgument("PicardConfig: rho must be positive");
  if (!(lambda_margin > 1)) throw InvalidArgument("PicardConfig: lambda_margin must exceed 1");
  if (max_iter < 1) throw InvalidArgument("PicardConfig: max_iter must be at least 1");
  if (!(fix_tol > 0)) throw InvalidArgument("PicardConfig: fix_tol must be positive");
  if (!std::isnan(lipschitz_mu) && !(lipschitz_mu >= 0)) throw InvalidArgument("PicardConfig: mu must be nonnegative");
  if (nx < 3) throw InvalidArgument("PicardConfig: nx must be at least 3");
  if (!(dt > 0 && horizon > 0)) throw InvalidArgument("PicardConfig: dt and horizon must be positive");
  if (!(safety >= 1)) throw InvalidArgument("PicardConfig: safety factor must be at least 1");
  if (random_samples < 0) throw InvalidArgument("PicardConfig: random_samples must be nonnegative");
}

double SegmentReport::max_ratio() const {
  return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

double step_interval(double a, double T, double M, double rho, double c, double epsilon) {
  if (!(T >= a)) throw InvalidArgument("step_interval: T must not precede a");
  if (!(M >= 0)) throw InvalidArgument("step_interval: M must be nonnegative");
  if (M == 0.0) return T;
  const double r = rho / M;
  return a + std::min({T - a, r, c * r, epsilon * r, std::sqrt(2.0 * r)});
}

double lambda_choice(double mu, double c, double epsilon, double margin) {
  if (!(mu >= 0)) throw InvalidArgument("lambda_choice: mu must be nonnegative");
  if (!(margin > 1)) throw InvalidArgument("lambda_choice: margin must exceed 1");
  return margin * std::max(1.0, mu * (2.0 + 1.0 / c + (1.0 + 2.0 * c * c) / epsilon));
}

double contraction_factor(double mu, double lambda, double c, double epsilon) {
  return mu / lambda * (1.0 / lambda + 1.0 / c + 1.0 + 1.0 / epsilon + 2.0 * c * c / (epsilon * lambda));
}

double weighted_norm(const GridFunction& g, double lambda, double t_ref) {
  if (!g.has_ut() || !g.has_space_derivatives()) throw InvalidArgument("weighted_norm: derivative grids required");
  double su = 0, sx = 0, st = 0, sxx = 0;
  for (int k = 0; k < g.nt; ++k) {
    const double w = std::exp(-lambda * (g.t(k) - t_ref));
    for (int i = 0; i < g.nx; ++i) {
      const size_t n = static_cast<size_t>(k) * g.nx + i;
      su = std::max(su, w * std::abs(g.u[n]));
      sx = std::max(sx, w * std::abs(g.ux[n]));
      st = std::max(st, w * std::abs(g.ut[n]));
      sxx = std::max(sxx, w * std::abs(g.uxx[n]));
    }
  }
  return su + sx + st + sxx;
}

namespace {

GridFunction make_segment(int nx, int nt, double dt, double t0) {
  GridFunction g(nx, nt, dt, t0, true);
  g.ux.assign(g.u.size(), 0.0);
  g.uxx.assign(g.u.size(), 0.0);
  return g;
}

GridFunction difference(const GridFunction& a, const GridFunction& b) {
  GridFunction d = a;
  for (size_t n = 0; n < d.u.size(); ++n) {
    d.u[n] -= b.u[n];
    d.ut[n] -= b.ut[n];
    d.ux[n] -= b.ux[n];
    d.uxx[n] -= b.uxx[n];
  }
  return d;
}

void copy_level(const GridFunction& from, int kf, GridFunction& to, int kt) {
  const size_t sf = static_cast<size_t>(kf) * from.nx, st = static_cast<size_t>(kt) * to.nx;
  std::copy_n(from.u.begin() + sf, from.nx, to.u.begin() + st);
  std::copy_n(from.ut.begin() + sf, from.nx, to.ut.begin() + st);
  std::copy_n(from.ux.begin() + sf, from.nx, to.ux.begin() + st);
  std::copy_n(from.uxx.begin() + sf, from.nx, to.uxx.begin() + st);
}

// Kernel sums of one time lag against one sampled function of xi.
struct Sums {
  double v = 0, t = 0, tt = 0, x = 0, xt = 0, xx = 0, xxt = 0;
};

// int_0^1 w_*(x_i, xi, s) F(xi) dxi by the trapezoid rule, for the fields of w built from
// the tabulated theta row. w = theta(x - xi) - theta(x + xi); the x-odd fields pick up
// sgn(i - j), and the one-sided values at the corners x - xi = 0 and x + xi = 0, 2 are
// replaced by their average, which is zero.
template <bool kFull>
Sums kernel_sums(const ThetaJet* row, int nx, int i, const std::vector<double>& F) {
  Sums s;
  const int top = 2 * (nx - 1);
  for (int j = 0; j < nx; ++j) {
    const double f = (j == 0 || j == nx - 1) ? 0.5 * F[j] : F[j];
    if (f == 0.0) continue;
    const int d = std::abs(i - j), p = i + j;
    const ThetaJet& a = row[d];
    const ThetaJet& b = row[p];
    const double sg = i > j ? 1.0 : (i < j ? -1.0 : 0.0);
    const bool corner = (p == 0 || p == top);
    s.v += f * (a.v - b.v);
    s.t += f * (a.t - b.t);
    s.x += f * (sg * a.x - (corner ? 0.0 : b.x));
    s.xx += f * (a.xx - b.xx);
    if constexpr (kFull) {
      s.tt += f * (a.tt - b.tt);
      s.xt += f * (sg * a.xt - (corner ? 0.0 : b.xt));
      s.xxt += f * (a.xxt - b.xxt);
    }
  }
  return s;
}

}  // namespace

struct PicardOperator::Quad {
  double u = 0, ux = 0, ut = 0, uxx = 0;
};

PicardOperator::PicardOperator(const ProblemSpec& spec, int nx, double dt, int nt)
    : spec_(spec), nx_(nx), nt_(nt), dt_(dt) {
  if (!spec.zero_boundaries()) throw InvalidArgument("PicardOperator: boundary data must vanish");
  if (nx < 3 || nt < 2 || !(dt > 0)) throw InvalidArgument("PicardOperator: bad grid");
  table_ = std::make_shared<KernelTable>(spec.epsilon, spec.c, nx, dt, nt - 1);
  u0_.resize(nx);
  u0xx_.resize(nx);
  g1_.resize(nx);
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / (nx - 1);
    u0_[i] = spec.init_u(x);
    u0xx_[i] = spec.init_uxx(x);
    g1_[i] = spec.init_ut(x) - spec.epsilon * u0xx_[i];
  }
}

GridFunction PicardOperator::initial_level() const {
  GridFunction g = make_segment(nx_, 1, dt_, 0.0);
  for (int i = 0; i < nx_; ++i) {
    const double x = static_cast<double>(i) / (nx_ - 1);
    g.u[i] = u0_[i];
    g.ut[i] = spec_.init_ut(x);
    g.ux[i] = spec_.init_ux(x);
    g.uxx[i] = u0xx_[i];
  }
  return g;
}

std::vector<double> PicardOperator::forcing_row(const GridFunction& g, int k, double t) const {
  std::vector<double> F(nx_);
  const size_t s = static_cast<size_t>(k) * nx_;
  for (int i = 0; i < nx_; ++i) {
    const double x = static_cast<double>(i) / (nx_ - 1);
    F[i] = spec_.f(x, t, g.u[s + i], g.ux[s + i], g.uxx[s + i], g.ut[s + i]);
  }
  return F;
}

void PicardOperator::accumulate(std::vector<Quad>& out, int lag, double weight, const std::vector<double>& F) const {
  const double dx = 1.0 / (nx_ - 1);
  if (lag == 0) {
    // w vanishes at lag zero while w_t tends to the identity on interior points.
    for (int i = 1; i < nx_ - 1; ++i) out[i].ut += weight * F[i];
    return;
  }
  const ThetaJet* row = &table_->at(lag, 0);
  const double delta = row[0].delta_xx;
  for (int i = 0; i < nx_; ++i) {
    const Sums s = kernel_sums<false>(row, nx_, i, F);
    out[i].u += weight * dx * s.v;
    out[i].ux += weight * dx * s.x;
    out[i].ut += weight * dx * s.t;
    out[i].uxx += weight * dx * s.xx;
    if (i > 0 && i < nx_ - 1) out[i].uxx += weight * delta * F[i];
  }
}

GridFunction PicardOperator::omega(const GridFunction& history, int a, int k_end) const {
  if (a < 0 || k_end < a || k_end >= nt_) throw InvalidArgument("PicardOperator::omega: bad level range");
  if (history.nx != nx_ || history.nt <= a) throw InvalidArgument("PicardOperator::omega: history too short");
  const double dx = 1.0 / (nx_ - 1);
  GridFunction out = make_segment(nx_, k_end - a + 1, dt_, a * dt_);

  std::vector<std::vector<double>> F_hist;
  for (int m = 0; m <= a; ++m) F_hist.push_back(forcing_row(history, m, m * dt_));

  const GridFunction init = initial_level();
  for (int k = a; k <= k_end; ++k) {
    const int kl = k - a;
    if (k == 0) {
      copy_level(init, 0, out, 0);
      continue;
    }
    std::vector<Quad> acc(nx_);
    // Data: u = int w_t u0 + int w (u1 - eps u0'').
    const ThetaJet* row = &table_->at(k, 0);
    for (int i = 0; i < nx_; ++i) {
      const Sums su0 = kernel_sums<true>(row, nx_, i, u0_);
      const Sums sg1 = kernel_sums<true>(row, nx_, i, g1_);
      acc[i].u = dx * (su0.t + sg1.v);
      acc[i].ux = dx * (su0.xt + sg1.x);
      acc[i].ut = dx * (su0.tt + sg1.t);
      acc[i].uxx = dx * (su0.xxt + sg1.xx);
      if (i > 0 && i < nx_ - 1) acc[i].uxx += row[0].delta_xxt * u0_[i] + row[0].delta_xx * g1_[i];
    }
    // History: trapezoid over tau in [0, a].
    for (int m = 0; m <= a && a > 0; ++m) {
      const double w = dt_ * ((m == 0 || m == a) ? 0.5 : 1.0);
      accumulate(acc, k - m, w, F_hist[m]);
    }
    const size_t s = static_cast<size_t>(kl) * nx_;
    for (int i = 0; i < nx_; ++i) {
      out.u[s + i] = acc[i].u;
      out.ux[s + i] = acc[i].ux;
      out.ut[s + i] = acc[i].ut;
      out.uxx[s + i] = acc[i].uxx;
    }
  }
  return out;
}

GridFunction PicardOperator::apply(const GridFunction& omega_seg, const GridFunction& candidate) const {
  if (omega_seg.nt != candidate.nt || omega_seg.nx != nx_ || candidate.nx != nx_)
    throw InvalidArgument("PicardOperator::apply: grid mismatch");
  const int L = candidate.nt - 1;
  const int a = static_cast<int>(std::lround(candidate.t0 / dt_));
  std::vector<std::vector<double>> F(L + 1);
  for (int m = 0; m <= L; ++m) F[m] = forcing_row(candidate, m, (a + m) * dt_);

  GridFunction out = make_segment(nx_, L + 1, dt_, candidate.t0);
  copy_level(candidate, 0, out, 0);
  for (int k = 1; k <= L; ++k) {
    std::vector<Quad> acc(nx_);
    for (int m = 0; m <= k; ++m) {
      const double w = dt_ * ((m == 0 || m == k) ? 0.5 : 1.0);
      accumulate(acc, k - m, w, F[m]);
    }
    const size_t s = static_cast<size_t>(k) * nx_;
    for (int i = 0; i < nx_; ++i) {
      out.u[s + i] = omega_seg.u[s + i] + acc[i].u;
      out.ux[s + i] = omega_seg.ux[s + i] + acc[i].ux;
      out.ut[s + i] = omega_seg.ut[s + i] + acc[i].ut;
      out.uxx[s + i] = omega_seg.uxx[s + i] + acc[i].uxx;
    }
  }
  return out;
}

void PicardOperator::check_tube(const GridFunction& omega_seg, const GridFunction& candidate, double rho) {
  const std::array<std::pair<const char*, const std::vector<double>GridFunction::*>, 4> comps{
      {{"u", &GridFunction::u}, {"u_x", &GridFunction::ux}, {"u_t", &GridFunction::ut}, {"u_xx", &GridFunction::uxx}}};
  for (const auto& [name, member] : comps) {
    const auto& c = candidate.*member;
    const auto& o = omega_seg.*member;
    for (size_t n = 0; n < c.size(); ++n) {
      const double excess = std::abs(c[n] - o[n]) - rho;
      if (excess > 0) {
        const int k = static_cast<int>(n / candidate.nx), i = static_cast<int>(n % candidate.nx);
        throw TubeViolation("Picard iterate left the tube in " + std::string(name), name, candidate.x(i),
                            candidate.t(k), excess);
      }
    }
  }
}

namespace {

// The 81 corners of the tube box followed by random interior points.
std::vector<std::array<double, 4>> tube_offsets(double rho, int n_random, std::mt19937_64& rng) {
  std::vector<std::array<double, 4>> out;
  for (int code = 0; code < 81; ++code) {
    std::array<double, 4> o{};
    int c = code;
    for (int d = 0; d < 4; ++d, c /= 3) o[d] = (c % 3 - 1) * rho;
    out.push_back(o);
  }
  std::uniform_real_distribution<double> U(-rho, rho);
  for (int r = 0; r < n_random; ++r) out.push_back({U(rng), U(rng), U(rng), U(rng)});
  return out;
}

int stride_for(long points, long budget) { return static_cast<int>(std::max(1L, points / std::max(1L, budget))); }

double estimate_M(const ProblemSpec& spec, const GridFunction& om, double rho, const PicardConfig& cfg,
                  std::mt19937_64& rng) {
  const auto offs = tube_offsets(rho, cfg.random_samples, rng);
  const int stride = stride_for(static_cast<long>(om.nt) * om.nx * static_cast<long>(offs.size()), 3'000'000);
  double best = 0.0;
  for (int k = 0; k < om.nt; ++k) {
    for (int i = 0; i < om.nx; i += (i + stride < om.nx || i == om.nx - 1) ? stride : std::max(1, om.nx - 1 - i)) {
      const size_t n = static_cast<size_t>(k) * om.nx + i;
      for (const auto& o : offs) {
        const double f = spec.f(om.x(i), om.t(k), om.u[n] + o[0], om.ux[n] + o[1], om.uxx[n] + o[2], om.ut[n] + o[3]);
        best = std::max(best, std::abs(f));
      }
      if (i == om.nx - 1) break;
    }
  }
  return cfg.safety * best;
}

double estimate_mu(const ProblemSpec& spec, const GridFunction& om, double rho, const PicardConfig& cfg,
                   std::mt19937_64& rng) {
  const auto offs = tube_offsets(rho, cfg.random_samples, rng);
  const int stride = stride_for(static_cast<long>(om.nt) * om.nx * static_cast<long>(offs.size()) * 8, 3'000'000);
  double best = 0.0;
  for (int k = 0; k < om.nt; ++k) {
    for (int i = 0; i < om.nx; i += stride) {
      const size_t n = static_cast<size_t>(k) * om.nx + i;
      for (const auto& o : offs) {
        std::array<double, 4> z{om.u[n] + o[0], om.ux[n] + o[1], om.uxx[n] + o[2], om.ut[n] + o[3]};
        for (int d = 0; d < 4; ++d) {
          const double h = 1e-6 * std::max(1.0, std::abs(z[d]));
          auto zp = z, zm = z;
          zp[d] += h;
          zm[d] -= h;
          const double fp = spec.f(om.x(i), om.t(k), zp[0], zp[1], zp[2], zp[3]);
          const double fm = spec.f(om.x(i), om.t(k), zm[0], zm[1], zm[2], zm[3]);
          best = std::max(best, std::abs(fp - fm) / (2 * h));
        }
      }
    }
  }
  return cfg.safety * best;
}

GridFunction slice_levels(const GridFunction& g, int from, int count) {
  GridFunction s = make_segment(g.nx, count, g.dt, g.t(from));
  for (int k = 0; k < count; ++k) copy_level(g, from + k, s, k);
  return s;
}

}  // namespace

PicardResult solve_picard(const ProblemSpec& spec, const PicardConfig& cfg) {
  cfg.validate();
  spec.validate();
  const bool reduce = !spec.zero_boundaries();
  const ProblemSpec work = reduce ? reduce_to_normal_form(spec) : spec;
  const double ts = work.transform.time_scale;
  const double H = cfg.horizon * ts;
  const int nt = std::max(2, static_cast<int>(std::lround(H / (cfg.dt * ts)))) + 1;
  const double dt = H / (nt - 1);

  PicardOperator op(work, cfg.nx, dt, nt);
  GridFunction state = make_segment(cfg.nx, nt, dt, 0.0);
  copy_level(op.initial_level(), 0, state, 0);
  std::mt19937_64 rng(cfg.seed);

  PicardResult res;
  int a = 0;
  while (a < nt - 1) {
    const double ta = a * dt;
    GridFunction om_all = op.omega(state, a, nt - 1);
    const double M = estimate_M(work, om_all, cfg.rho, cfg, rng);
    const double b = step_interval(ta, H, M, cfg.rho, work.c, work.epsilon);
    int b_idx = std::min(nt - 1, a + static_cast<int>(std::floor((b - ta) / dt + 1e-9)));
    if (b_idx <= a) throw PicardStalled("solve_picard: segment length fell below the time step", ta / ts);

    GridFunction om = slice_levels(om_all, 0, b_idx - a + 1);
    copy_level(state, a, om, 0);
    SegmentReport rep;
    rep.a = ta / ts;
    rep.b = b_idx * dt / ts;
    rep.M = M;
    rep.mu = std::isnan(cfg.lipschitz_mu) ? estimate_mu(work, om, cfg.rho, cfg, rng) : cfg.lipschitz_mu;
    rep.lambda = lambda_choice(rep.mu, work.c, work.epsilon, cfg.lambda_margin);
    rep.contraction_bound = contraction_factor(rep.mu, rep.lambda, work.c, work.epsilon);

    GridFunction cand = om;
    double prev = -1.0;
    bool done = false;
    for (int it = 1; it <= cfg.max_iter; ++it) {
      GridFunction next = op.apply(om, cand);
      PicardOperator::check_tube(om, next, cfg.rho);
      const double diff = weighted_norm(difference(next, cand), rep.lambda, ta);
      if (prev > 0) rep.ratios.push_back(diff / prev);
      prev = diff;
      cand = std::move(next);
      rep.iterations = it;
      rep.final_residual = diff;
      if (diff < cfg.fix_tol) {
        done = true;
        break;
      }
    }
    if (!done) throw NoConvergence("solve_picard: fixed-point iteration exhausted max_iter");
    for (int k = 1; k < cand.nt; ++k) copy_level(cand, k, state, a + k);
    res.segments.push_back(rep);
    a = b_idx;
  }

  res.reached = cfg.horizon;
  res.solution = reduce ? restore_original(work, state) : state;
  return res;
}

}  // namespace dwl
