#include "dwl/functionals/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dwl/errors.hpp"

namespace dwl {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
constexpr double kPi4 = kPi2 * kPi2;
}  // namespace

double omega1() { return kPi4 / (1.0 + kPi4); }
double omega2() { return kPi4 / (1.0 + kPi2 + kPi4); }
double omega3() { return kPi2 / (1.0 + kPi2); }

double c2_sq_of(double epsilon, double gamma) {
  return std::max(epsilon * (1.0 + epsilon) / 2.0, (1.0 + epsilon + gamma) / 2.0);
}

double k1_sq_of(double epsilon, double gamma) {
  return std::min(epsilon * epsilon * omega3() / 8.0, (2.0 * gamma - 1.0) / 4.0);
}

double k1p_sq_of(double epsilon, double gamma) {
  return 0.5 * std::min({gamma - 0.5, epsilon * epsilon / 4.0, (1.0 + gamma) * omega3()});
}

double k3_sq_of(double epsilon, double K, double lambda_split) {
  return std::min({3.0 * epsilon * (1.0 - lambda_split) * omega1() / 4.0,
                   epsilon * (3.0 * lambda_split * kPi2 / 4.0 - K), 1.0});
}

double k3p_sq_of(double epsilon) { return std::min(epsilon * omega2() / 4.0, 1.0); }

double optimal_lambda_split(double epsilon, double K) {
  if (!(epsilon > 0)) throw InvalidArgument("optimal_lambda_split: epsilon must be positive");
  if (!(K >= 0) || K >= 3.0 * kPi2 / 4.0)
    throw InvalidArgument("optimal_lambda_split: need 0 <= K < 3 pi^2 / 4");
  // 3(1-l) w1 / 4 = 3 l pi^2 / 4 - K  (eps cancels)
  const double a = 0.75 * omega1();
  return (a + K) / (a + 0.75 * kPi2);
}

ConstantsBundle compute_constants(double epsilon, double gamma, double K_bound, double lambda_split) {
  if (!(epsilon > 0)) throw InvalidArgument("compute_constants: epsilon must be positive");
  if (!(gamma > 0.5)) throw InvalidArgument("compute_constants: gamma must exceed 1/2");
  if (!(lambda_split > 0 && lambda_split < 1))
    throw InvalidArgument("compute_constants: lambda_split must lie in (0, 1)");
  if (!(K_bound >= 0)) throw InvalidArgument("compute_constants: K must be nonnegative");
  if (!(3.0 * lambda_split * kPi2 / 4.0 > K_bound))
    throw InvalidArgument("compute_constants: 3 lambda pi^2 / 4 must exceed K");

  ConstantsBundle b;
  b.epsilon = epsilon;
  b.gamma = gamma;
  b.omega1 = omega1();
  b.omega2 = omega2();
  b.omega3 = omega3();
  b.c2_sq = c2_sq_of(epsilon, gamma);
  b.c1_sq = std::min(epsilon * epsilon * b.omega1 / 8.0, 0.5 * (gamma - 0.5));
  b.A = epsilon / 2.0 + 2.0 / epsilon;
  b.c3_sq = b.omega2 * epsilon / 2.0;
  b.p = b.c3_sq / b.c2_sq;
  b.k1_sq = k1_sq_of(epsilon, gamma);
  b.k3_sq = k3_sq_of(epsilon, K_bound, lambda_split);
  b.k1p_sq = k1p_sq_of(epsilon, gamma);
  b.k3p_sq = k3p_sq_of(epsilon);
  b.lambda_split = lambda_split;
  b.K_bound = K_bound;
  return b;
}

ConstantsBundle compute_constants(double epsilon, double gamma, double K_bound) {
  return compute_constants(epsilon, gamma, K_bound, optimal_lambda_split(epsilon, K_bound));
}

}  // namespace dwl
