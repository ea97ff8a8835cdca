#include <cmath>

#include "doctest.h"
#include "ultrajet/error.hpp"
#include "ultrajet/jets.hpp"

using namespace ultrajet;

TEST_CASE("nearest point with the tie rule") {
  const auto E = CompactSet1D::make({0.0, 1.0}, {});
  CHECK(nearest_point(E, 0.3).xhat == 0.0);
  CHECK(nearest_point(E, 0.3).d == doctest::Approx(0.3));
  CHECK(nearest_point(E, 0.5).xhat == 0.0);
  const auto E2 = CompactSet1D::make({2.0}, {{0.0, 1.0}});
  CHECK(nearest_point(E2, 1.4).xhat == 1.0);
  CHECK(nearest_point(E2, 1.4).d == doctest::Approx(0.4));
  CHECK(nearest_point(E2, 0.5).d == 0.0);
  CHECK_THROWS((void)CompactSet1D::make({}, {{0.0, 1.0}, {0.5, 2.0}}));
}

TEST_CASE("sampled jets of builtin functions") {
  const auto E0 = CompactSet1D::make({0.0}, {});
  const Jet e = sample_jet(analytic::Exp{}, E0, 10);
  for (int k = 0; k <= 10; ++k) CHECK(e.value(0, k) == 1.0);
  const Jet s = sample_jet(analytic::Sin{}, E0, 7);
  const double cyc[] = {0, 1, 0, -1};
  for (int k = 0; k <= 7; ++k) CHECK(s.value(0, k) == doctest::Approx(cyc[k % 4]));
  const Jet q = sample_jet(analytic::Polynomial{{0, 0, 1}}, CompactSet1D::make({0.0, 1.0}, {}), 4);
  const double at0[] = {0, 0, 2, 0, 0};
  const double at1[] = {1, 2, 2, 0, 0};
  for (int k = 0; k <= 4; ++k) {
    CHECK(q.value(0, k) == at0[k]);
    CHECK(q.value(1, k) == at1[k]);
  }
  // 1/(1+x^2) at 0: derivatives 1, 0, -2, 0, 24
  const Jet r = sample_jet(analytic::Rational{{1}, {1, 0, 1}}, E0, 4);
  const double rat[] = {1, 0, -2, 0, 24};
  for (int k = 0; k <= 4; ++k) CHECK(r.value(0, k) == doctest::Approx(rat[k]));
  CHECK_THROWS_AS((void)sample_jet(analytic::Rational{{1}, {-1, 0, 1}}, CompactSet1D::make({0.0, 2.0}, {}), 4), Error);
}

TEST_CASE("Taylor polynomials and remainders") {
  const auto E0 = CompactSet1D::make({0.0}, {});
  const Jet c = sample_jet(analytic::Polynomial{{0, 0, 0, 1}}, E0, 5);
  const Poly T = taylor_poly(c, 0, 3);
  for (double x : {-1.0, 0.5, 2.0}) CHECK(static_cast<double>(T.eval(x)) == doctest::Approx(x * x * x));
  CHECK(static_cast<double>(taylor_poly(c, 0, 0).eval(3.0)) == 0.0);
  const Poly Te = taylor_poly(sample_jet(analytic::Exp{}, E0, 4), 0, 2);
  CHECK(static_cast<double>(Te.eval(0.5)) == doctest::Approx(1 + 0.5 + 0.125));
  CHECK_THROWS_AS((void)taylor_poly(c, 0, 6), Error);

  const Jet e = sample_jet(analytic::Exp{}, CompactSet1D::make({0.0, 1.0}, {}), 8);
  CHECK(remainder(e, 0, 1, 4, 0) == doctest::Approx(std::exp(1.0) - (1 + 1 + 0.5 + 1.0 / 6 + 1.0 / 24)));
  CHECK(remainder(e, 0, 0, 4, 2) == 0.0);
  const Jet q = sample_jet(analytic::Polynomial{{1, -2, 3}}, CompactSet1D::make({0.0, 1.0}, {}), 5);
  CHECK(std::abs(remainder(q, 0, 1, 3, 1)) < 1e-14);
}

TEST_CASE("norm profiles") {
  const Jet e = sample_jet(analytic::Exp{}, CompactSet1D::make({0.0, 1.0}, {}), 12);
  const auto M = make_sequence(family::Gevrey{1.0}, 64);
  const JetNormProfile p = jet_norm_profile(e, M, {1.0});
  CHECK(p.C_of_rho[0] <= std::exp(1.0) + 1e-9);
  CHECK(p.C_of_rho[0] >= std::exp(1.0) - 1e-9);  // attained by F^0(1)
  CHECK_FALSE(jet_norm_profile(e, M, default_rho_grid()).not_in_class);

  const Jet z = e.scaled(0.0);
  for (double c : jet_norm_profile(z, M, default_rho_grid()).C_of_rho) CHECK(c == 0.0);

  std::vector<std::vector<double>> v(1);
  for (int k = 0; k <= 16; ++k) v[0].push_back(std::exp(2 * std::lgamma(k + 1.0)));
  const Jet big(CompactSet1D::make({0.0}, {}), 16, {0.0}, v);
  CHECK(jet_norm_profile(big, M, default_rho_grid()).not_in_class);
}

TEST_CASE("two-variable Taylor algebra") {
  // f(x, y) = x^2 y sampled at two points
  Jet2D F;
  F.points = {{0.0, 0.0}, {1.0, 2.0}};
  F.p_max = 3;
  F.values.resize(2);
  for (std::size_t i = 0; i < 2; ++i) {
    const double x = F.points[i][0];
    const double y = F.points[i][1];
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b) {
        double v = 0.0;
        if (a == 0 && b == 0) v = x * x * y;
        if (a == 1 && b == 0) v = 2 * x * y;
        if (a == 2 && b == 0) v = 2 * y;
        if (a == 0 && b == 1) v = x * x;
        if (a == 1 && b == 1) v = 2 * x;
        if (a == 2 && b == 1) v = 2;
        F.values[i][{a, b}] = v;
      }
  }
  CHECK(taylor_deriv_2d(F, 0, 3, {0, 0}, {1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(std::abs(remainder_2d(F, 0, 1, 3, {1, 0})) < 1e-12);
  CHECK(remainder_2d(F, 0, 1, 2, {0, 0}) == doctest::Approx(2.0));
}
