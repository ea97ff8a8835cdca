#include <cmath>

#include "doctest.h"
#include "ultrajet/decide.hpp"
#include "ultrajet/error.hpp"

using namespace ultrajet;

TEST_CASE("phi_{p,k} by direct maximization") {
  const auto G1 = make_sequence(family::Gevrey{1.0}, 32);
  // sup_{j<5} (5!/j!)^{1/(5-j)} is attained at j = 4
  CHECK(phi_pk(G1, G1, 1.0, 5) == doctest::Approx(5.0));
  double brute = 0.0;
  const auto G2 = make_sequence(family::Gevrey{2.0}, 32);
  for (int j = 0; j < 9; ++j)
    brute = std::max(brute, std::exp((G2.log_M(9) - 9 * std::log(3.0) - G1.log_M(j)) / (9 - j)));
  CHECK(phi_pk(G2, G1, 3.0, 9) == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("quotient growth and tail sums on Gevrey sequences") {
  const auto G2 = make_sequence(family::Gevrey{2.0}, 256);
  const auto G3 = make_sequence(family::Gevrey{3.0}, 256);
  CHECK(check_quotient_growth(G2).holds());
  CHECK(check_tail_sum(G2, G3).holds());
  CHECK(check_tail_sum(G3, G2).verdict == Verdict::Fails);
  CHECK(decide_pair(G2, G3).holds());
  CHECK(decide_pair(G2, G2).holds());
  CHECK(decide_pair(make_sequence(family::Gevrey{1.0}, 256), G2).holds());
  CHECK_FALSE(decide_pair(G3, G2).holds());
}

TEST_CASE("extension property of the omega_2 matrix") {
  const WeightFunction w = WeightFunction::omega_s(2);
  const WeightMatrix N = associated_matrix(w, default_param_grid(), 512);
  CHECK(check_root_cover(N).verdict.holds());
  const TailFormsReport t = check_tail_forms(N);
  CHECK(t.applicable());
  CHECK(t.agree());
  const DecisionReport d = decide_extension_property(N, w);
  CHECK(d.answer == Answer::Yes);
  CHECK(to_string(d.answer) == "YES");
}

TEST_CASE("extension property of a single Gevrey row") {
  const WeightMatrix N = WeightMatrix::assemble({1.0}, {make_sequence(family::Gevrey{2.0}, 512)});
  CHECK(decide_extension_property(N).answer == Answer::Yes);
}
