#include <cmath>

#include "doctest.h"
#include "ultrajet/spline.hpp"

using namespace ultrajet;

TEST_CASE("box convolution keeps the integral and adds one order of smoothness") {
  PiecewisePolynomial f = PiecewisePolynomial::indicator(-1.0, 1.0);
  CHECK(f.integral() == doctest::Approx(2.0));
  CHECK(f.smoothness() == -1);
  const double widths[] = {0.5, 0.25, 0.125, 0.0625};
  for (int i = 0; i < 4; ++i) {
    const int deg = f.max_degree();
    f = f.box_convolve(widths[i]);
    CHECK(f.integral() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.smoothness() == i);
    CHECK(f.max_degree() == deg + 1);
    for (int k = 0; k <= i; ++k) CHECK(f.max_jump(k) < 1e-8);
  }
  CHECK(f.support_lo() == doctest::Approx(-1.0 - 0.46875));
  CHECK(f.support_hi() == doctest::Approx(1.0 + 0.46875));
  CHECK(f.eval(0.0) == doctest::Approx(1.0));
  CHECK(f.eval(5.0) == 0.0);
}

TEST_CASE("derivatives agree with finite differences") {
  const PiecewisePolynomial f = smooth_indicator(0.0, 1.0, {0.3, 0.2, 0.1});
  const double h = 1e-5;
  for (double x : {-0.27, -0.12, 0.07, 0.13, 0.93, 1.17}) {
    const auto d = f.derivs(x, 2);
    CHECK(d[1] == doctest::Approx((f.eval(x + h) - f.eval(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(d[2] == doctest::Approx((f.deriv(1, x + h) - f.deriv(1, x - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("smooth indicator values") {
  const PiecewisePolynomial f = smooth_indicator(-0.5, 0.5, {0.2, 0.2});
  CHECK(f.eval(0.0) == 1.0);
  CHECK(f.eval(0.25) == doctest::Approx(1.0));
  CHECK(f.eval(0.7) == 0.0);
  // symmetric profile crosses 1/2 at the original endpoint
  CHECK(f.eval(0.5) == doctest::Approx(0.5));
  for (double x = -0.8; x <= 0.8; x += 0.01) {
    CHECK(f.eval(x) >= -1e-15);
    CHECK(f.eval(x) <= 1.0 + 1e-15);
  }
}
