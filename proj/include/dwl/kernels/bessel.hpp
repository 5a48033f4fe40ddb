#pragma once

namespace dwl {

/// Modified Bessel function of the first kind, order zero.
/// Power series for z <= 15, Hankel asymptotic expansion beyond.
/// Throws OverflowError when the result is not representable.
double bessel_i0(double z);

/// Exponentially scaled variant e^{-z} I0(z); never overflows.
double bessel_i0e(double z);

}  // namespace dwl
