#include "dwl/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dwl/errors.hpp"

namespace dwl {

GridFunction::GridFunction(int nx_, int nt_, double dt_, double t0_, bool with_ut)
    : nx(nx_), nt(nt_), dt(dt_), t0(t0_) {
  if (nx < 3) throw InvalidArgument("GridFunction: nx must be at least 3");
  if (nt < 1) throw InvalidArgument("GridFunction: nt must be at least 1");
  if (!(dt > 0.0)) throw InvalidArgument("GridFunction: dt must be positive");
  const size_t n = static_cast<size_t>(nx) * nt;
  u.assign(n, 0.0);
  if (with_ut) ut.assign(n, 0.0);
}

void GridFunction::fill_space_derivatives() {
  ux.resize(u.size());
  uxx.resize(u.size());
  for (int k = 0; k < nt; ++k) {
    const auto d1 = diff1(row(u, k), dx());
    const auto d2 = diff2(row(u, k), dx());
    std::copy(d1.begin(), d1.end(), row(ux, k).begin());
    std::copy(d2.begin(), d2.end(), row(uxx, k).begin());
  }
}

double GridFunction::interpolate(const std::vector<double>& a, double x, double t) const {
  const double xs = std::clamp(x, 0.0, 1.0) * (nx - 1);
  int i = std::min(static_cast<int>(xs), nx - 2);
  const double wx = xs - i;
  double ts = (t - t0) / dt;
  ts = std::clamp(ts, 0.0, static_cast<double>(nt - 1));
  int k = nt > 1 ? std::min(static_cast<int>(ts), nt - 2) : 0;
  const double wt = nt > 1 ? ts - k : 0.0;
  auto val = [&](int kk, int ii) { return a[static_cast<size_t>(kk) * nx + ii]; };
  const double lo = (1 - wx) * val(k, i) + wx * val(k, i + 1);
  if (nt == 1) return lo;
  const double hi = (1 - wx) * val(k + 1, i) + wx * val(k + 1, i + 1);
  return (1 - wt) * lo + wt * hi;
}

std::vector<double> diff1(std::span<const double> f, double dx) {
  const size_t n = f.size();
  if (n < 3) throw InvalidArgument("diff1 needs at least 3 samples");
  std::vector<double> d(n);
  for (size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * dx);
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * dx);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * dx);
  return d;
}

std::vector<double> diff2(std::span<const double> f, double dx) {
  const size_t n = f.size();
  if (n < 3) throw InvalidArgument("diff2 needs at least 3 samples");
  std::vector<double> d(n);
  const double h2 = dx * dx;
  for (size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / h2;
  if (n >= 4) {
    d[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h2;
    d[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / h2;
  } else {
    d[0] = d[n - 1] = d[1];
  }
  return d;
}

double trapezoid(std::span<const double> f, double dx) {
  if (f.empty()) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

double boundary_mismatch(const GridFunction& g, const ProblemSpec& spec) {
  double worst = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    worst = std::max(worst, std::abs(g.at(k, 0) - spec.left(g.t(k))));
    worst = std::max(worst, std::abs(g.at(k, g.nx - 1) - spec.right(g.t(k))));
  }
  return worst;
}

StatePair StatePair::from_functions(int nx, const Profile& phi, const Profile& phi_x,
                                    const Profile& phi_xx, const Profile& psi, bool problem_p) {
  if (nx < 3) throw InvalidArgument("StatePair needs at least 3 samples");
  StatePair s;
  s.problem_p = problem_p;
  s.phi.resize(nx);
  s.phi_x.resize(nx);
  s.phi_xx.resize(nx);
  s.psi.resize(nx);
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / (nx - 1);
    s.phi[i] = eval(phi, x);
    s.phi_x[i] = eval(phi_x, x);
    s.phi_xx[i] = eval(phi_xx, x);
    s.psi[i] = eval(psi, x);
  }
  if (problem_p) {
    // Exact zeros at the ends; sin(pi) and friends are only zero to rounding.
    s.phi.front() = s.phi.back() = 0.0;
    s.psi.front() = s.psi.back() = 0.0;
  }
  return s;
}

StatePair StatePair::from_samples(std::vector<double> phi, std::vector<double> psi, bool problem_p) {
  if (phi.size() != psi.size()) throw InvalidArgument("StatePair: phi and psi sizes differ");
  StatePair s;
  s.problem_p = problem_p;
  const double dx = 1.0 / (static_cast<double>(phi.size()) - 1);
  s.phi_x = diff1(phi, dx);
  s.phi_xx = diff2(phi, dx);
  s.phi = std::move(phi);
  s.psi = std::move(psi);
  return s;
}

StatePair StatePair::from_grid(const GridFunction& g, int k, bool problem_p) {
  auto phi = g.row(g.u, k);
  std::vector<double> psi(g.nx, 0.0);
  if (g.has_ut()) {
    auto r = g.row(g.ut, k);
    psi.assign(r.begin(), r.end());
  }
  if (g.has_space_derivatives()) {
    StatePair s;
    s.problem_p = problem_p;
    s.phi.assign(phi.begin(), phi.end());
    auto a = g.row(g.ux, k);
    auto b = g.row(g.uxx, k);
    s.phi_x.assign(a.begin(), a.end());
    s.phi_xx.assign(b.begin(), b.end());
    s.psi = std::move(psi);
    return s;
  }
  return from_samples(std::vector<double>(phi.begin(), phi.end()), std::move(psi), problem_p);
}

void StatePair::validate(double tol) const {
  const size_t n = phi.size();
  if (n < 3 || phi_x.size() != n || phi_xx.size() != n || psi.size() != n)
    throw InvalidArgument("StatePair: inconsistent sample counts");
  if (problem_p) {
    const double worst = std::max({std::abs(phi.front()), std::abs(phi.back()), std::abs(psi.front()),
                                   std::abs(psi.back())});
    if (worst > tol) throw InvalidArgument("StatePair: problem-P state must vanish at x = 0 and x = 1");
  }
}

void write_grid_csv(std::ostream& os, const GridFunction& g) {
  os << "x,t,u,ut\n";
  os.precision(17);
  for (int k = 0; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      const size_t idx = static_cast<size_t>(k) * g.nx + i;
      os << g.x(i) << ',' << g.t(k) << ',' << g.u[idx] << ',' << (g.has_ut() ? g.ut[idx] : 0.0) << '\n';
    }
  }
}

void write_grid_csv(const std::string& path, const GridFunction& g) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_grid_csv(os, g);
  if (!os) throw Error("write failed for " + path);
}

GridFunction read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("grid CSV is empty");
  if (line.rfind("x,t,u,ut", 0) != 0) throw InvalidArgument("grid CSV must start with header x,t,u,ut");
  std::vector<double> xs, ts, us, uts;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double v[4];
    for (double& vi : v) {
      if (!std::getline(row, cell, ',')) throw InvalidArgument("grid CSV row has fewer than 4 columns");
      vi = std::stod(cell);
    }
    xs.push_back(v[0]);
    ts.push_back(v[1]);
    us.push_back(v[2]);
    uts.push_back(v[3]);
  }
  if (xs.empty()) throw InvalidArgument("grid CSV has no data rows");
  int nx = 1;
  while (nx < static_cast<int>(ts.size()) && ts[nx] == ts[0]) ++nx;
  if (us.size() % nx != 0) throw InvalidArgument("grid CSV is not a full rectangle");
  const int nt = static_cast<int>(us.size() / nx);
  const double dt = nt > 1 ? ts[nx] - ts[0] : 1.0;
  GridFunction g(nx, nt, dt, ts[0]);
  g.u = std::move(us);
  g.ut = std::move(uts);
  return g;
}

GridFunction read_grid_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read_grid_csv(is);
}

}  // namespace dwl
