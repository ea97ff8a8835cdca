#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "ultrajet/descend.hpp"
#include "ultrajet/error.hpp"
#include "ultrajet/extend.hpp"

using namespace ultrajet;

namespace {

std::shared_ptr<const WeightMatrix> omega2_matrix() {
  static const auto Nm = std::make_shared<const WeightMatrix>(
      associated_matrix(WeightFunction::omega_s(2), default_param_grid(), 512));
  return Nm;
}

}  // namespace

TEST_CASE("alpha sequence starts with (2p)^k") {
  const auto& Nm = *omega2_matrix();
  const CutoffFamily fam(Nm.row(3), Nm.row(4));
  const AlphaSequence a = alpha_sequence(fam.descendant(), fam.Ndot(), 2, fam.A(), 40);
  CHECK(a.log_alpha[0] == 0.0);
  CHECK(a.log_alpha[1] == doctest::Approx(std::log(4.0)));
  CHECK(a.log_alpha[2] == doctest::Approx(std::log(16.0)));
  CHECK(a.valid);
  CHECK(a.ratio_sum <= 1.0);
}

TEST_CASE("cutoff functions") {
  const auto& Nm = *omega2_matrix();
  const CutoffFamily fam(Nm.row(3), Nm.row(4));
  CHECK(fam.B() == doctest::Approx(1.0 / (6.0 * fam.delta() * fam.A())));
  const auto& phi = fam.build(1.0, 2.0);
  CHECK(phi.eval(0.0) == 1.0);
  CHECK(phi.eval(-1.0) == doctest::Approx(1.0));
  CHECK(phi.eval(2.0) == 0.0);
  CHECK(phi.eval(-3.0) == 0.0);
  double wsum = 0.0;
  for (double w : fam.widths(1.0, 2.0)) wsum += w;
  CHECK(wsum <= 1.0 + 1e-12);
  const CutoffCheck c = verify_cutoff(fam, 0.5, 1.5, 6, 300);
  CHECK(c.ok());
  CHECK_THROWS_AS((void)verify_cutoff(fam, 1.0, 2.0, fam.conv_depth(), 10), Error);
}

TEST_CASE("Whitney cover of the complement") {
  const auto E = CompactSet1D::make({0.0, 1.0}, {});
  const WhitneyCover1D W = whitney_cover(E);
  CHECK(W.coverage_ok);
  CHECK_FALSE(W.degenerate_gap);
  CHECK(W.n0 >= 1);
  for (const Ball& b : W.balls) {
    CHECK(b.d > 0.0);
    CHECK(b.r < b.d);
    CHECK(nearest_point(E, b.x).d == doctest::Approx(b.d));
  }
  CHECK(W.covered(0.5));
  CHECK(W.covered(-1.0));
  CHECK_FALSE(W.covered(0.0));
  CHECK(whitney_cover(CompactSet1D::make({0.0, 2e-6}, {})).degenerate_gap);
}

TEST_CASE("partition of unity sums to one") {
  const auto& Nm = *omega2_matrix();
  const auto E = CompactSet1D::make({0.0, 1.0}, {});
  const WhitneyCover1D W = whitney_cover(E);
  const RowChain ch = select_row_chain(Nm, 0, W.n0);
  CHECK(ch.N <= ch.Ndot);
  CHECK(ch.Ndot <= ch.Nddot);
  const auto [P, rows] = partition_with_rows(W, Nm, ch.Ndot, 1.0);
  CHECK(rows.Nddot_p > rows.Ndot_p);
  CHECK(P.sum(0.5) == doctest::Approx(1.0));
  CHECK(P.sum(-0.3) == doctest::Approx(1.0));
  const PartitionCheck pc = verify_partition(P, 3, 200);
  CHECK(pc.ok());
}

TEST_CASE("extension of polynomial and zero jets") {
  const auto Nm = omega2_matrix();
  const auto E = CompactSet1D::make({0.0, 1.0}, {});
  ExtendConfig cfg;
  cfg.L = 1.0;
  const ExtensionResult R = extend_jet(sample_jet(analytic::Polynomial{{0, 0, 1}}, E, 16), Nm, cfg);
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = -0.5 + 2.0 * i / 400;
    if (nearest_point(E, x).d >= 0.5) continue;
    const auto d = R.f->derivs(x, 3);
    worst = std::max({worst, std::abs(d[0] - x * x), std::abs(d[1] - 2 * x), std::abs(d[2] - 2),
                      std::abs(d[3])});
  }
  CHECK(worst < 1e-9);
  CHECK(R.f->eval(5.0) == 0.0);

  const ExtensionResult Z = extend_jet(sample_jet(analytic::Exp{}, E, 16).scaled(0.0), Nm, cfg);
  for (double x : {-0.7, 0.3, 0.5, 1.2}) CHECK(Z.f->eval(x) == 0.0);
}

TEST_CASE("extension of exp at one point") {
  const ExtensionResult R = extend_jet(sample_jet(analytic::Exp{}, CompactSet1D::make({0.0}, {}), 16), omega2_matrix());
  const auto& v = R.verification;
  CHECK(v.ladder_decreasing);
  CHECK(v.taylor_jumps.ok());
  CHECK(v.growth_trend.verdict != Verdict::Fails);
  CHECK(R.D1 == doctest::Approx(R.f->L() / R.f->rho()));
  const auto d = R.f->derivs(1e-4, 4);
  for (int k = 0; k <= 4; ++k) CHECK(d[k] == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("jets outside the class are rejected") {
  std::vector<std::vector<double>> v(1);
  for (int k = 0; k <= 16; ++k) v[0].push_back(std::exp(2 * std::lgamma(k + 1.0)));
  const Jet F(CompactSet1D::make({0.0}, {}), 16, {0.0}, v);
  CHECK_THROWS_AS((void)extend_jet(F, omega2_matrix()), Error);
}

TEST_CASE("difference of Taylor polynomials") {
  const Jet H = sample_jet(analytic::Exp{}, CompactSet1D::make({0.0, 1.0}, {}), 16);
  const Descendant S = descend(omega2_matrix()->row(0));
  const FittedJetConstants fit = fit_jet_constants(H, S.small_s);
  std::mt19937 gen(11);
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t a1 = gen() % H.size();
    const std::size_t a2 = gen() % H.size();
    const int p = static_cast<int>(gen() % 16);
    const int k = static_cast<int>(gen() % (p + 1));
    const double x = std::uniform_real_distribution<double>(-1.0, 2.0)(gen);
    const auto [lhs, rhs] = check_taylor_difference_bound(H, S.small_s, fit.C, fit.rho, a1, a2, p, k, x);
    if (lhs > rhs) ++violations;
  }
  CHECK(violations == 0);
}
