#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ftrect/math.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using ftrect::fpow;

TEST_CASE("fpow evaluates signed rational powers") {
  CHECK_THAT(fpow(-1.0, 5, 3), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(fpow(-8.0, 2, 3), WithinRel(4.0, 1e-14));
  CHECK_THAT(fpow(32.0, 2, 5), WithinRel(4.0, 1e-14));
  CHECK_THAT(fpow(-8.0, 1, 3), WithinRel(-2.0, 1e-14));
  CHECK_THAT(fpow(8.0, 5, 3), WithinRel(32.0, 1e-14));
  CHECK(fpow(0.0, 3, 5) == 0.0);
}

TEST_CASE("fpow parity and identity properties") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-50.0, 50.0);
  for (int n = 0; n < 1000; ++n) {
    const double v = x(rng);
    CHECK_THAT(fpow(v, 3, 3), WithinRel(v, 1e-13));
    CHECK(fpow(v, 2, 3) >= 0.0);
    CHECK_THAT(fpow(v, 2, 3), WithinRel(fpow(-v, 2, 3), 1e-14));
    CHECK_THAT(fpow(v, 5, 3), WithinRel(-fpow(-v, 5, 3), 1e-14));
    // Integer-exact oracle: cube of the cube root.
    const double root = fpow(v, 1, 3);
    CHECK_THAT(root * root * root, WithinRel(v, 1e-12));
  }
}

TEST_CASE("sgn and sat follow the sign conventions") {
  CHECK(ftrect::sgn(0.0) == 0.0);
  CHECK(ftrect::sgn(-3.0) == -1.0);
  CHECK(ftrect::sgn(1e-300) == 1.0);
  CHECK(ftrect::sat(0.5) == 0.5);
  CHECK(ftrect::sat(2.0) == 1.0);
  CHECK(ftrect::sat(-3.0) == -1.0);
  CHECK(ftrect::sig_pow(-4.0, 0.5) == -2.0);
}
