#pragma once

#include <string>

#include <json.hpp>

#include "dwl/core/problem.hpp"
#include "dwl/fd/fd_solver.hpp"
#include "dwl/picard/picard.hpp"

namespace dwl {

using Json = nlohmann::json;

/// Read a JSON document. Throws InvalidArgument on I/O or parse errors.
Json load_config_file(const std::string& path);

/// Build a problem from a "problem" block:
///
///   { "epsilon": 1, "c": 1, "horizon": 1,
///     "forcing": { "type": "sine_gordon", "a": 0.5, "b": 1 },
///     "u0": { "type": "sine", "amplitude": 0.1, "mode": 1 },
///     "u1": { "type": "zero" },
///     "h1": { "type": "zero" }, "h2": { "type": "zero" } }
///
/// Forcings:
///   sine_gordon     f = -b sin u - a u_t
///   linear_damping  f = -k u - a u_t
///   spike           f = sqrt(scale * g(t)) sin u, g the triangle train {b0_sq, alpha, beta}
///   power           f = -kappa sgn(u) |u|^tau - a u_t
///   custom_table    f = value(t) * sin(mode pi x), value linearly interpolated in {t, values}
///   zero
/// Spatial profiles (u0, u1): zero, sine {amplitude, mode}, linear {left, right},
///   bump {amplitude} = amplitude * 16 x^2 (1-x)^2.
/// Boundary profiles (h1, h2): zero, constant {value}, sine {amplitude, frequency},
///   ramp {value, rate} = value + rate t.
/// Missing keys take the defaults shown above; unknown types raise InvalidArgument.
ProblemSpec problem_from_json(const Json& j);

/// Solver settings. Keys mirror the struct fields; unknown keys raise InvalidArgument.
FDConfig fd_config_from_json(const Json& j);
PicardConfig picard_config_from_json(const Json& j);

}  // namespace dwl
