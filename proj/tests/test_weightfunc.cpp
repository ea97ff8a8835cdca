#include <cmath>

#include "doctest.h"
#include "ultrajet/error.hpp"
#include "ultrajet/weightfunc.hpp"

using namespace ultrajet;

namespace {
// sup_y (x y - y^s) on a fine grid
double grid_conjugate(double s, double x) {
  double best = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double y = 20.0 * i / 400000.0;
    best = std::max(best, x * y - std::pow(y, s));
  }
  return best;
}
}  // namespace

TEST_CASE("young conjugate of y^s") {
  const auto w = WeightFunction::omega_s(2.0);
  CHECK(young_conjugate(w, 0.0) == 0.0);
  CHECK(young_conjugate(w, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(young_conjugate(w, 4.0) == doctest::Approx(grid_conjugate(2.0, 4.0)).epsilon(1e-8));
  const auto w3 = WeightFunction::omega_s(3.0);
  for (double x : {0.5, 3.0, 10.0}) CHECK(young_conjugate(w3, x) == doctest::Approx(grid_conjugate(3.0, x)).epsilon(1e-7));
  CHECK(w3.phi_convex_on_grid());
}

TEST_CASE("omega_s rows from the closed form") {
  const auto row = omega_s_row(2.0, 1.0, 16);
  CHECK(std::exp(row.log_M(2)) == doctest::Approx(std::exp(1.0)));
  const auto N = associated_matrix(WeightFunction::omega_s(2.0), {0.5, 1.0, 2.0}, 64);
  CHECK(N.closed_form_deviation < 1e-9);
  for (std::size_t i = 0; i + 1 < N.size(); ++i)
    for (int k = 1; k <= 64; ++k) {
      CHECK(N.row(i).log_M(k) <= N.row(i + 1).log_M(k));
      CHECK(N.row(i).log_mu(k) <= N.row(i + 1).log_mu(k));
    }
}

TEST_CASE("quotient doubling between x and 4x rows") {
  for (double x : {0.5, 1.0, 2.0}) CHECK(check_quotient_doubling_pair(omega_s_row(2, x, 256), omega_s_row(2, 4 * x, 256)));
  CHECK(check_power_difference_bounds(2.0, 256));
  CHECK(check_tail_vs_quotient(omega_s_row(2, 1.0, 256)).holds());
  CHECK(check_next_quotient_root(2.0, 1.0, 6.0, 256).holds());
}

TEST_CASE("admissibility of sample matrices") {
  const auto N = associated_matrix(WeightFunction::omega_s(2.0), default_param_grid(), 256);
  const auto rep = check_admissible_matrix(N);
  for (const auto& c : rep.conditions) CHECK_FALSE(c.fails());
  CHECK(rep.admissible_in_sample());

  const auto g = WeightMatrix::assemble({1.0}, {make_sequence(family::Gevrey{2.0}, 256)});
  CHECK(check_admissible_matrix(g).admissible_in_sample());
  const auto q = WeightMatrix::assemble({1.0}, {make_sequence(family::QGevrey{2.0}, 256)});
  CHECK(check_admissible_matrix(q).conditions[3].verdict == Verdict::NotWitnessedInSample);
}

TEST_CASE("integral condition on weight functions") {
  const auto r2 = check_omega_nonquasianalytic(WeightFunction::omega_s(2.0));
  CHECK(r2.integral.holds());
  CHECK(r2.shifted_bound.holds());
  CHECK(r2.A.has_value());
  // int_1^inf t^-2 (log t)^2 dt = 2, and 6 for the cube
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(check_omega_nonquasianalytic(WeightFunction::omega_s(3.0)).value == doctest::Approx(6.0).epsilon(1e-6));
  const auto lin = WeightFunction::table({{1.0, 0.0}, {10.0, 9.0}, {100.0, 99.0}});
  CHECK(check_omega_nonquasianalytic(lin).integral.fails());
}
