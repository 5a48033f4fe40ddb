#include "dwl/kernels/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dwl/errors.hpp"

namespace dwl {
namespace {

constexpr double kSeriesLimit = 15.0;

double series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// Sum of the Hankel series; multiply by e^z / sqrt(2 pi z) for I0.
double hankel_sum(double z) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double odd = 2.0 * k + 1.0;
    const double next = term * odd * odd / (8.0 * (k + 1) * z);
    // The series is asymptotic: stop once the terms start growing.
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

double bessel_i0e(double z) {
  if (z < 0.0 || std::isnan(z)) throw InvalidArgument("bessel_i0: argument must be nonnegative");
  if (z <= kSeriesLimit) return series(z) * std::exp(-z);
  return hankel_sum(z) / std::sqrt(2.0 * std::numbers::pi * z);
}

double bessel_i0(double z) {
  if (z < 0.0 || std::isnan(z)) throw InvalidArgument("bessel_i0: argument must be nonnegative");
  if (z <= kSeriesLimit) return series(z);
  const double log_value = z - 0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(hankel_sum(z));
  if (log_value >= std::log(std::numeric_limits<double>::max()))
    throw OverflowError("bessel_i0: result overflows double precision");
  return std::exp(z) * (hankel_sum(z) / std::sqrt(2.0 * std::numbers::pi * z));
}

}  // namespace dwl
