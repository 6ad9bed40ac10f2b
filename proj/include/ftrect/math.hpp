#pragma once

#include <cmath>

namespace ftrect {

/// Signum with sgn(0) = 0.
constexpr double sgn(double x) noexcept { return static_cast<double>((x > 0.0) - (x < 0.0)); }

/// Unit saturation: identity on [-1, 1], sign outside.
constexpr double sat(double x) noexcept { return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x); }

/// sgn(x)^a * |x|^(a/b). `b` must be odd and positive, which keeps the root real for x < 0.
double fpow(double x, int a, int b);

/// sgn(x) * |x|^alpha; odd in x for any real exponent.
inline double sig_pow(double x, double alpha) {
  return x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), alpha), x);
}

}  // namespace ftrect
