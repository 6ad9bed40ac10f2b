#include "ftrect/math.hpp"

#include <stdexcept>
#include <string>

namespace ftrect {

double fpow(double x, int a, int b) {
  if (b <= 0 || b % 2 == 0) {
    throw std::invalid_argument("fpow: denominator must be odd and positive, got " + std::to_string(b));
  }
  if (x == 0.0) {
    return a == 0 ? 1.0 : (a > 0 ? 0.0 : HUGE_VAL);
  }
  if (a == b) {
    return x;
  }
  const double mag = std::pow(std::abs(x), static_cast<double>(a) / static_cast<double>(b));
  return (x < 0.0 && (a % 2 != 0)) ? -mag : mag;
}

}  // namespace ftrect
