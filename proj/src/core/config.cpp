#include "dwl/core/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "dwl/errors.hpp"
#include "dwl/forcing/spike.hpp"

namespace dwl {

namespace {

std::string type_of(const Json& j, const char* fallback) {
  if (j.is_null()) return fallback;
  if (!j.is_object()) throw InvalidArgument("config: expected an object with a \"type\" key");
  return j.value("type", std::string(fallback));
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) return;
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw InvalidArgument("config: unknown key \"" + k + "\" in " + where);
  }
}

double num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw InvalidArgument(std::string("config: \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

// A spatial profile and its first two derivatives.
struct ProfileSet {
  Profile f, fx, fxx;
};

ProfileSet spatial_profile(const Json& j, const std::string& where) {
  const std::string t = type_of(j, "zero");
  if (t == "zero") {
    reject_unknown(j, {"type"}, where);
    return {};
  }
  if (t == "sine") {
    reject_unknown(j, {"type", "amplitude", "mode"}, where);
    const double A = num(j, "amplitude", 0.1);
    const double k = M_PI * num(j, "mode", 1.0);
    return {[=](double x) { return A * std::sin(k * x); }, [=](double x) { return A * k * std::cos(k * x); },
            [=](double x) { return -A * k * k * std::sin(k * x); }};
  }
  if (t == "linear") {
    reject_unknown(j, {"type", "left", "right"}, where);
    const double l = num(j, "left", 0.0), r = num(j, "right", 0.0);
    return {[=](double x) { return l + (r - l) * x; }, [=](double) { return r - l; }, [](double) { return 0.0; }};
  }
  if (t == "bump") {
    reject_unknown(j, {"type", "amplitude"}, where);
    const double A = 16.0 * num(j, "amplitude", 0.1);
    return {[=](double x) { return A * x * x * (1 - x) * (1 - x); },
            [=](double x) { return A * (2 * x - 6 * x * x + 4 * x * x * x); },
            [=](double x) { return A * (2 - 12 * x + 12 * x * x); }};
  }
  throw InvalidArgument("config: unknown profile type \"" + t + "\" in " + where);
}

struct BoundarySet {
  Profile h, ht, htt;
};

BoundarySet boundary_profile(const Json& j, const std::string& where) {
  const std::string t = type_of(j, "zero");
  if (t == "zero") {
    reject_unknown(j, {"type"}, where);
    return {};
  }
  if (t == "constant") {
    reject_unknown(j, {"type", "value"}, where);
    const double v = num(j, "value", 0.0);
    return {[=](double) { return v; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  }
  if (t == "ramp") {
    reject_unknown(j, {"type", "value", "rate"}, where);
    const double v = num(j, "value", 0.0), r = num(j, "rate", 0.0);
    return {[=](double s) { return v + r * s; }, [=](double) { return r; }, [](double) { return 0.0; }};
  }
  if (t == "sine") {
    reject_unknown(j, {"type", "amplitude", "frequency"}, where);
    const double A = num(j, "amplitude", 0.0), w = num(j, "frequency", 1.0);
    return {[=](double s) { return A * std::sin(w * s); }, [=](double s) { return A * w * std::cos(w * s); },
            [=](double s) { return -A * w * w * std::sin(w * s); }};
  }
  throw InvalidArgument("config: unknown boundary type \"" + t + "\" in " + where);
}

Forcing forcing_from_json(const Json& j) {
  const std::string t = type_of(j, "zero");
  if (t == "zero") {
    reject_unknown(j, {"type"}, "forcing");
    return {};
  }
  if (t == "sine_gordon") {
    reject_unknown(j, {"type", "a", "b"}, "forcing");
    const double a = num(j, "a", 0.5), b = num(j, "b", 1.0);
    return [=](double, double, double u, double, double, double ut) { return -b * std::sin(u) - a * ut; };
  }
  if (t == "linear_damping") {
    reject_unknown(j, {"type", "a", "k"}, "forcing");
    const double a = num(j, "a", 0.5), k = num(j, "k", 0.0);
    return [=](double, double, double u, double, double, double ut) { return -k * u - a * ut; };
  }
  if (t == "power") {
    reject_unknown(j, {"type", "a", "kappa", "tau"}, "forcing");
    const double a = num(j, "a", 0.5), kappa = num(j, "kappa", 1.0), tau = num(j, "tau", 0.5);
    if (!(tau > 0)) throw InvalidArgument("config: power forcing needs tau > 0");
    return [=](double, double, double u, double, double, double ut) {
      const double s = u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);
      return -kappa * s * std::pow(std::abs(u), tau) - a * ut;
    };
  }
  if (t == "spike") {
    reject_unknown(j, {"type", "b0_sq", "alpha", "beta", "scale"}, "forcing");
    SpikeFamily fam;
    fam.b0_sq = num(j, "b0_sq", fam.b0_sq);
    fam.alpha = num(j, "alpha", fam.alpha);
    fam.beta = num(j, "beta", fam.beta);
    fam.validate();
    const double scale = num(j, "scale", 1.0);
    if (!(scale >= 0)) throw InvalidArgument("config: spike scale must be nonnegative");
    return [=](double, double t, double u, double, double, double) {
      return std::sqrt(scale * spike_value(t, fam)) * std::sin(u);
    };
  }
  if (t == "custom_table") {
    reject_unknown(j, {"type", "t", "values", "mode"}, "forcing");
    if (!j.contains("t") || !j.contains("values")) throw InvalidArgument("config: custom_table needs t and values");
    const auto ts = j.at("t").get<std::vector<double>>();
    const auto vs = j.at("values").get<std::vector<double>>();
    if (ts.size() != vs.size() || ts.size() < 2) throw InvalidArgument("config: custom_table needs matching arrays of length >= 2");
    if (!std::is_sorted(ts.begin(), ts.end()) || std::adjacent_find(ts.begin(), ts.end()) != ts.end())
      throw InvalidArgument("config: custom_table times must increase strictly");
    const double k = M_PI * num(j, "mode", 1.0);
    return [=](double x, double t, double, double, double, double) {
      double v;
      if (t <= ts.front()) {
        v = vs.front();
      } else if (t >= ts.back()) {
        v = vs.back();
      } else {
        const auto it = std::upper_bound(ts.begin(), ts.end(), t);
        const size_t i = static_cast<size_t>(it - ts.begin());
        const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
        v = (1 - w) * vs[i - 1] + w * vs[i];
      }
      return v * std::sin(k * x);
    };
  }
  throw InvalidArgument("config: unknown forcing type \"" + t + "\"");
}

}  // namespace

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("config " + path + ": " + e.what());
  }
}

ProblemSpec problem_from_json(const Json& j) {
  if (!j.is_null() && !j.is_object()) throw InvalidArgument("config: problem must be an object");
  reject_unknown(j, {"epsilon", "c", "horizon", "forcing", "u0", "u1", "h1", "h2"}, "problem");
  const Json empty;
  auto sub = [&](const char* k) -> const Json& { return j.contains(k) ? j.at(k) : empty; };

  ProblemSpec s;
  s.epsilon = num(j, "epsilon", 1.0);
  s.c = num(j, "c", 1.0);
  s.horizon = num(j, "horizon", 1.0);
  s.forcing = forcing_from_json(sub("forcing"));
  const auto u0 = spatial_profile(sub("u0"), "u0");
  s.u0 = u0.f;
  s.u0_x = u0.fx;
  s.u0_xx = u0.fxx;
  s.u1 = spatial_profile(sub("u1"), "u1").f;
  const auto h1 = boundary_profile(sub("h1"), "h1");
  const auto h2 = boundary_profile(sub("h2"), "h2");
  s.h1 = h1.h;
  s.h1_t = h1.ht;
  s.h1_tt = h1.htt;
  s.h2 = h2.h;
  s.h2_t = h2.ht;
  s.h2_tt = h2.htt;
  s.validate();
  return s;
}

FDConfig fd_config_from_json(const Json& j) {
  reject_unknown(j, {"nx", "dt", "scheme", "theta_weight", "corrector", "output_stride", "blowup_factor"}, "fd");
  FDConfig c;
  if (j.is_null()) return c;
  c.nx = j.value("nx", c.nx);
  c.dt = num(j, "dt", c.dt);
  const std::string scheme = j.value("scheme", std::string("semi_implicit"));
  if (scheme == "semi_implicit") {
    c.scheme = FDScheme::semi_implicit;
  } else if (scheme == "explicit_euler") {
    c.scheme = FDScheme::explicit_euler;
  } else {
    throw InvalidArgument("config: unknown fd scheme \"" + scheme + "\"");
  }
  c.theta_weight = num(j, "theta_weight", c.theta_weight);
  c.corrector = j.value("corrector", c.corrector);
  c.output_stride = j.value("output_stride", c.output_stride);
  c.blowup_factor = num(j, "blowup_factor", c.blowup_factor);
  return c;
}

PicardConfig picard_config_from_json(const Json& j) {
  reject_unknown(j,
                 {"rho", "lambda_margin", "max_iter", "fix_tol", "lipschitz_mu", "nx", "dt", "horizon", "safety",
                  "random_samples", "seed"},
                 "picard");
  PicardConfig c;
  if (j.is_null()) return c;
  c.rho = num(j, "rho", c.rho);
  c.lambda_margin = num(j, "lambda_margin", c.lambda_margin);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.fix_tol = num(j, "fix_tol", c.fix_tol);
  if (j.contains("lipschitz_mu") && !j.at("lipschitz_mu").is_null()) c.lipschitz_mu = num(j, "lipschitz_mu", 0.0);
  c.nx = j.value("nx", c.nx);
  c.dt = num(j, "dt", c.dt);
  c.horizon = num(j, "horizon", c.horizon);
  c.safety = num(j, "safety", c.safety);
  c.random_samples = j.value("random_samples", c.random_samples);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

}  // namespace dwl
