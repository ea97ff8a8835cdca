#include <cmath>
#include <vector>

#include "doctest.h"
#include "ultrajet/error.hpp"
#include "ultrajet/seqcalc.hpp"

using namespace ultrajet;

namespace {
// brute-force oracles over explicit values
double brute_h(const std::vector<double>& M, double t, int* arg = nullptr) {
  double best = INFINITY;
  for (std::size_t k = 0; k < M.size(); ++k) {
    const double v = M[k] * std::pow(t, double(k));
    if (v < best * (1 - 1e-12)) {
      best = v;
      if (arg) *arg = int(k);
    }
  }
  return best;
}
std::vector<double> factorials(int K) {
  std::vector<double> v{1.0};
  for (int k = 1; k <= K; ++k) v.push_back(v.back() * k);
  return v;
}
}  // namespace

TEST_CASE("gevrey(1) values are factorials") {
  const auto M = make_sequence(family::Gevrey{1.0}, 5);
  const double expect[] = {0, 0, std::log(2.0), std::log(6.0), std::log(24.0), std::log(120.0)};
  for (int k = 0; k <= 5; ++k) CHECK(M.log_M(k) == doctest::Approx(expect[k]).epsilon(1e-14));
}

TEST_CASE("qgevrey quotients against direct ratios") {
  const auto M = make_sequence(family::QGevrey{2.0}, 3);
  for (int k = 1; k <= 3; ++k) {
    const double direct = std::pow(2.0, k * k) / std::pow(2.0, (k - 1) * (k - 1));
    CHECK(M.mu(k) == doctest::Approx(direct));
  }
}

TEST_CASE("table input is validated") {
  CHECK_THROWS_AS((void)make_sequence(family::Table{{1, 0.5, 1, 4}}, 3), Error);
  try {
    (void)make_sequence(family::Table{{1, 0.5, 1, 4}}, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonLogConvex);
  }
  CHECK_THROWS((void)make_sequence(family::Table{{1, 0, 1}}, 2));
}

TEST_CASE("h_assoc matches a brute-force scan") {
  const auto M = make_sequence(family::Gevrey{1.0}, 20);
  const auto f = factorials(20);
  CHECK(h_assoc(M, 2.0).value == 1.0);
  const HResult r = h_assoc(M, 0.2);
  int arg = -1;
  CHECK(r.value == doctest::Approx(brute_h(f, 0.2, &arg)));
  CHECK(r.attained_k == 4);
  CHECK(arg == 4);
  CHECK(r.trusted);
  for (double t : {0.05, 0.11, 0.3, 0.7}) CHECK(h_assoc(M, t).value == doctest::Approx(brute_h(f, t)).epsilon(1e-12));
  CHECK_FALSE(h_assoc(M, 1e-6).trusted);
}

TEST_CASE("counting functions by direct scan") {
  const auto M = make_sequence(family::Gevrey{1.0}, 20);
  CHECK(gamma_count(M, 0.25) == 3);
  CHECK(gamma_count(M, 2.0) == 0);
  CHECK_THROWS_AS((void)gamma_count(M, 1e-9), Error);
  CHECK(sigma_count(M, 3.5) == 3);
  CHECK(sigma_count(M, 0.5) == 0);
  CHECK(sigma_count(make_sequence(family::Gevrey{2.0}, 20), 10.0) == 3);
}

TEST_CASE("omega_assoc closed form and h identity") {
  const auto M = make_sequence(family::Gevrey{1.0}, 30);
  CHECK(omega_assoc(M, 3.0) == doctest::Approx(std::log(4.5)));
  CHECK(omega_assoc(M, 0.9) == 0.0);
  for (double t : {0.05, 0.2, 0.5}) CHECK(std::exp(-omega_assoc(M, 1.0 / t)) == doctest::Approx(h_assoc(M, t).value));
}

TEST_CASE("moderate growth verdicts agree within each family") {
  for (double s : {1.0, 2.0}) {
    const auto rep = check_moderate_growth(make_sequence(family::Gevrey{s}, 256));
    CHECK(rep.coherent);
    CHECK(rep.summary.holds());
    CHECK(rep.conditions.at("moderate-3").witness_constant.value() == doctest::Approx(std::pow(2.0, s)).epsilon(1e-9));
  }
  const auto q = check_moderate_growth(make_sequence(family::QGevrey{2.0}, 256));
  CHECK(q.coherent);
  CHECK(q.summary.fails());
  CHECK(q.conditions.at("moderate-3").counterexample_index.has_value());
  const auto pl = make_sequence(family::PowerLog{2.0, 2.0}, 256);
  CHECK(check_moderate_growth(pl).summary.fails());
  CHECK(check_almost_concave(pl).holds());
}

TEST_CASE("mixed growth and non-quasianalyticity") {
  const auto g = make_sequence(family::Gevrey{2.0}, 128);
  const auto mg = check_mixed_growth(g, g);
  CHECK(mg.quotient_doubling.holds());
  CHECK(mg.quotient_doubling.witness_constant.value() == doctest::Approx(4.0).epsilon(1e-9));
  const auto q = make_sequence(family::QGevrey{2.0}, 128);
  CHECK(check_mixed_growth(q, q).quotient_doubling.fails());
  CHECK(check_nonquasianalytic(g).holds());
  CHECK(check_nonquasianalytic(make_sequence(family::Gevrey{1.0}, 128)).fails());
  CHECK(check_nonquasianalytic(q).holds());
}

TEST_CASE("equivalence of sequences") {
  const auto g1 = make_sequence(family::Gevrey{1.0}, 64);
  CHECK(check_equivalence(g1, g1).equivalent());
  std::vector<double> v;
  const auto f = factorials(64);
  for (int k = 0; k <= 64; ++k) v.push_back(std::pow(2.0, k) * f[static_cast<std::size_t>(k)]);
  const auto r = check_equivalence(g1, make_sequence(family::Table{v}, 64));
  CHECK(r.equivalent());
  CHECK(r.m_below_n.witness_constant.value() <= 2.0 + 1e-9);
  CHECK_FALSE(check_equivalence(g1, make_sequence(family::Gevrey{2.0}, 64)).equivalent());
}
