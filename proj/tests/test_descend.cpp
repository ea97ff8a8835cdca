#include <cmath>
#include <vector>

#include "doctest.h"
#include "ultrajet/descend.hpp"
#include "ultrajet/error.hpp"
#include "ultrajet/weightfunc.hpp"

using namespace ultrajet;

namespace {
// nu_k = (k+1)^2 / 1, normalized so nu_0 = 1 implicitly
WeightSequence squares(int K) {
  std::vector<double> lmu(static_cast<std::size_t>(K) + 1, 0.0);
  for (int k = 1; k <= K; ++k) lmu[static_cast<std::size_t>(k)] = 2.0 * std::log(k + 1.0);
  return WeightSequence::from_log_quotients(lmu);
}

// tau and sigma straight from the definition, with the exact tail of (k+1)^-2
std::vector<double> oracle_sigma(int K_eff, int K) {
  std::vector<double> tail(static_cast<std::size_t>(K) + 2, 0.0);
  // sum_{j > K} (j+1)^-2 = trigamma(K+2), asymptotic series
  const double n = K + 2.0;
  double acc = 1.0 / n + 1.0 / (2 * n * n) + 1.0 / (6 * n * n * n) - 1.0 / (30 * std::pow(n, 5));
  for (int j = K; j >= 1; --j) {
    acc += 1.0 / ((j + 1.0) * (j + 1.0));
    tail[static_cast<std::size_t>(j)] = acc;
  }
  std::vector<double> sigma(static_cast<std::size_t>(K_eff) + 1, 1.0);
  const double tau1 = 1.0 / 4.0 + tail[1];
  for (int k = 1; k <= K_eff; ++k) {
    const double tau = k / ((k + 1.0) * (k + 1.0)) + tail[static_cast<std::size_t>(k)];
    sigma[static_cast<std::size_t>(k)] = tau1 * k / tau;
  }
  return sigma;
}
}  // namespace

TEST_CASE("descendant of (k+1)^2 against the definition") {
  const int K = 512;
  const auto N = squares(K);
  const double n = K + 2.0;
  const double exact_tail = 1.0 / n + 1.0 / (2 * n * n) + 1.0 / (6 * n * n * n) - 1.0 / (30 * std::pow(n, 5));
  const Descendant Dx = descend(N, {.K_eff = 0, .tail_beyond_K = exact_tail});
  const auto oracle = oracle_sigma(Dx.K_eff, K);
  for (int k = 1; k <= Dx.K_eff; ++k)
    CHECK(Dx.sigma_at(k) == doctest::Approx(oracle[static_cast<std::size_t>(k)]).epsilon(1e-9));

  // default path fits the tail; tau stays within its reported error bar
  const Descendant D = descend(N);
  CHECK(D.K_eff == 256);
  for (int k = 1; k <= D.K_eff; ++k)
    CHECK(std::abs(D.tau[static_cast<std::size_t>(k)] - Dx.tau[static_cast<std::size_t>(k)]) <=
          D.tau_error[static_cast<std::size_t>(k)]);
  CHECK(D.sigma_star[1] == 1.0);
  for (int k = 2; k <= D.K_eff; ++k) CHECK(D.sigma_star[static_cast<std::size_t>(k)] >= D.sigma_star[static_cast<std::size_t>(k) - 1]);
  const DescendantReport r = check_descendant(N, D);
  for (int i = 0; i < 4; ++i) CHECK(r.items[static_cast<std::size_t>(i)].holds());
}

TEST_CASE("quasianalytic input is rejected") {
  try {
    (void)descend(make_sequence(family::Gevrey{1.0}, 256));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuasianalyticInput);
  }
}

TEST_CASE("item (6) on omega_2 rows x and 4x") {
  const auto N = omega_s_row(2.0, 1.0, 512);
  const auto Nd = omega_s_row(2.0, 4.0, 512);
  const Descendant D = descend(N);
  const DescendantReport r = check_descendant(N, D, Nd);
  CHECK(r.items[5].holds());
  CHECK(r.items[3].holds());
}

TEST_CASE("predecessor round trip") {
  const Descendant D = descend(omega_s_row(2.0, 1.0, 512));
  const WeightSequence nu = recover_predecessor(D.sigma);
  CHECK(nu.log_mu(1) >= 0.0);
  for (int k = 2; k <= nu.K(); ++k) CHECK(nu.log_mu(k) > nu.log_mu(k - 1));
  const Descendant D2 = descend(nu, {.K_eff = D.K_eff, .tail_beyond_K = recovered_tail(nu)});
  for (int k = 1; k <= std::min(128, D.K_eff); ++k)
    CHECK(D2.sigma.log_mu(k) == doctest::Approx(D.sigma.log_mu(k)).epsilon(1e-6));
  double sum = 0.0;
  for (int k = 1; k <= nu.K(); ++k) sum += std::exp(-nu.log_mu(k));
  CHECK(sum <= 1.0 + 1e-12);
  CHECK(sum >= 0.9);
}

TEST_CASE("sigma_k = k has constant sigma* and is rejected") {
  std::vector<double> ls(65, 0.0);
  for (int k = 1; k <= 64; ++k) ls[static_cast<std::size_t>(k)] = std::log(double(k));
  CHECK_THROWS_AS((void)recover_predecessor(ls), Error);
}
