// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ultrajet/decide.hpp"
#include "ultrajet/descend.hpp"
#include "ultrajet/error.hpp"
#include "ultrajet/extend.hpp"

using namespace ultrajet;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void run(int id, double time_limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs > time_limit) o.require(false, "runtime " + std::to_string(secs) + " s");
  if (!o.ok) ++failures;
  std::printf("criterion %d: %s (%.2f s)%s%s\n", id, o.ok ? "PASS" : "FAIL", secs,
              o.detail.empty() ? "" : " ", o.detail.c_str());
  std::fflush(stdout);
}

struct Named {
  std::string name;
  WeightSequence M;
};

std::vector<Named> sequence_families(int K) {
  std::vector<Named> f;
  for (double s : {1.0, 1.5, 2.0, 3.0}) f.push_back({"gevrey(" + std::to_string(s) + ")", make_sequence(family::Gevrey{s}, K)});
  f.push_back({"qgevrey(2)", make_sequence(family::QGevrey{2.0}, K)});
  f.push_back({"powerlog(2,2)", make_sequence(family::PowerLog{2.0, 2.0}, K)});
  for (double rho : default_param_grid()) f.push_back({"W2 rho=" + std::to_string(rho), omega_s_row(2.0, rho, K)});
  return f;
}

std::shared_ptr<const WeightMatrix> omega2_matrix() {
  static const auto Nm = std::make_shared<const WeightMatrix>(
      associated_matrix(WeightFunction::omega_s(2), default_param_grid(), 512));
  return Nm;
}

Outcome coherence() {
  Outcome o;
  for (const auto& f : sequence_families(512)) {
    const ModerateGrowthReport r = check_moderate_growth(f.M);
    o.require(r.coherent, f.name + " incoherent: " + r.diagnostics);
  }
  return o;
}

Outcome associated_identities() {
  Outcome o;
  const int K = 512;
  const int grid = 10000;
  for (const auto& f : sequence_families(K)) {
    const WeightSequence& M = f.M;
    const double lo = -1.0;
    const double hi = M.log_mu(K) - 1e-6;
    double worst_omega = 0.0;
    int gamma_mismatch = 0;
    for (int i = 0; i < grid; ++i) {
      const double lt = lo + (hi - lo) * i / (grid - 1);
      bool on_quotient = false;
      for (int k = 1; k <= K && !on_quotient; ++k) on_quotient = std::abs(lt - M.log_mu(k)) < 1e-12;
      if (!on_quotient && gamma_count_log(M, -lt) != sigma_count_log(M, lt)) ++gamma_mismatch;
      const double w = omega_assoc_log(M, lt);
      const double via_h = -h_assoc_log(M, -lt).log_value;
      worst_omega = std::max(worst_omega, std::abs(w - via_h) / std::max(1.0, std::abs(w)));
    }
    o.require(gamma_mismatch == 0, f.name + " Gamma/Sigma mismatches " + std::to_string(gamma_mismatch));
    o.require(worst_omega <= 1e-9, f.name + " omega vs h " + std::to_string(worst_omega));

    // log M_k = sup_t log h(t) - k log t, sup taken on a log-t grid
    const double glo = -M.log_mu(K) - 1.0;
    std::vector<double> lh(grid);
    std::vector<double> lts(grid);
    for (int i = 0; i < grid; ++i) {
      lts[i] = glo + (1.0 - glo) * i / (grid - 1);
      lh[i] = h_assoc_log(M, lts[i]).log_value;
    }
    double worst_rec = 0.0;
    for (int k = 0; k < K; ++k) {
      double best = -INFINITY;
      for (int i = 0; i < grid; ++i) best = std::max(best, lh[i] - k * lts[i]);
      worst_rec = std::max(worst_rec, std::abs(best - M.log_M(k)) / std::max(1.0, std::abs(M.log_M(k))));
    }
    o.require(worst_rec <= 1e-6, f.name + " recovery " + std::to_string(worst_rec));
  }
  return o;
}

WeightSequence squares(int K) {
  std::vector<double> lmu(static_cast<std::size_t>(K) + 1, 0.0);
  for (int k = 1; k <= K; ++k) lmu[static_cast<std::size_t>(k)] = 2.0 * std::log(k + 1.0);
  return WeightSequence::from_log_quotients(lmu);
}

Outcome descendant_suite() {
  Outcome o;
  {
    const WeightSequence N = squares(512);
    const DescendantReport r = check_descendant(N, descend(N));
    for (int i = 0; i < 4; ++i) o.require(r.items[i].holds(), "(k+1)^2 item " + std::to_string(i + 1));
  }
  const auto& Nm = *omega2_matrix();
  for (std::size_t i = 0; i + 2 < Nm.size(); ++i) {
    // 4x lies two rows above on the dyadic grid
    const DescendantReport r = check_descendant(Nm.row(i), descend(Nm.row(i)), Nm.row(i + 2));
    for (int j : {0, 1, 2, 3, 5})
      o.require(r.items[j].holds(), "omega_2 row " + std::to_string(i) + " item " + std::to_string(j + 1));
  }
  const Descendant D = descend(Nm.row(3));
  const WeightSequence nu = recover_predecessor(D.sigma);
  const Descendant D2 = descend(nu, {.K_eff = D.K_eff, .tail_beyond_K = recovered_tail(nu)});
  double worst = 0.0;
  for (int k = 1; k <= std::min(128, D.K_eff); ++k)
    worst = std::max(worst, std::abs(std::expm1(D2.sigma.log_mu(k) - D.sigma.log_mu(k))));
  o.require(worst <= 1e-6, "round trip " + std::to_string(worst));
  double sum = 0.0;
  for (int k = 1; k <= nu.K(); ++k) sum += std::exp(-nu.log_mu(k));
  o.require(sum >= 0.9 && sum <= 1.0 + 1e-12, "partial sum " + std::to_string(sum));
  return o;
}

Outcome omega_s_properties() {
  Outcome o;
  for (double rho : {0.5, 1.0, 2.0, 4.0}) {
    const WeightSequence W = omega_s_row(2.0, rho, 256);
    const std::string tag = " rho=" + std::to_string(rho);
    o.require(check_tail_vs_quotient(W).holds(), "tail sum" + tag);
    o.require(check_quotient_growth(W).holds(), "quotient growth" + tag);
    o.require(check_next_quotient_root(2.0, rho, 6.0, 256).holds(), "next quotient root" + tag);
  }
  const OmegaIntegralReport r = check_omega_nonquasianalytic(WeightFunction::omega_s(2));
  o.require(r.integral.holds() && r.shifted_bound.holds() && r.A && r.B && std::isfinite(*r.A) && std::isfinite(*r.B),
            "integral condition");
  return o;
}

Outcome cutoffs() {
  Outcome o;
  const auto& Nm = *omega2_matrix();
  const CutoffFamily fam(Nm.row(3), Nm.row(4));
  for (double eps : {0.5, 1.0, 2.0})
    for (double t : {1.5, 2.0, 4.0}) {
      const CutoffCheck c = verify_cutoff(fam, eps, t, 8, 1000);
      o.require(c.ok(), "eps=" + std::to_string(eps) + " t=" + std::to_string(t) + " violations " +
                            std::to_string(c.bound_violations));
    }
  return o;
}

Outcome partitions() {
  Outcome o;
  const auto& Nm = *omega2_matrix();
  for (const auto& E : {CompactSet1D::make({0.0}), CompactSet1D::make({0.0, 1.0}), CompactSet1D::make({0.0, 0.1, 1.0})}) {
    const WhitneyCover1D W = whitney_cover(E);
    o.require(W.coverage_ok, "coverage " + W.note);
    const RowChain ch = select_row_chain(Nm, 0, W.n0);
    const auto P = partition_with_rows(W, Nm, ch.Ndot, 1.0).first;
    const PartitionCheck c = verify_partition(P, 4, 1000);
    o.require(c.ok(1e-9), "partition on " + std::to_string(E.points.size()) + " points: sum error " +
                              std::to_string(c.max_sum_error) + ", violations " + std::to_string(c.bound_violations));
  }
  return o;
}

Outcome extension_polynomial() {
  Outcome o;
  const auto E = CompactSet1D::make({0.0, 1.0});
  ExtendConfig cfg;
  cfg.L = 1.0;
  const auto R = extend_jet(sample_jet(analytic::Polynomial{{1, -2, 0, 1}}, E, 16), omega2_matrix(), cfg);
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -0.5 + 2.0 * i / 2000;
    if (nearest_point(E, x).d >= 0.5) continue;
    const auto d = R.f->derivs(x, 4);
    const double exact[] = {1 - 2 * x + x * x * x, -2 + 3 * x * x, 6 * x, 6, 0};
    for (int k = 0; k <= 4; ++k) worst = std::max(worst, std::abs(d[k] - exact[k]));
  }
  o.require(worst <= 1e-9, "worst " + std::to_string(worst));
  return o;
}

Outcome extension_exp() {
  Outcome o;
  const auto R = extend_jet(sample_jet(analytic::Exp{}, CompactSet1D::make({0.0}), 16), omega2_matrix());
  for (double x : {1e-4, -1e-4}) {
    const auto d = R.f->derivs(x, 8);
    for (int k = 0; k <= 8; ++k)
      o.require(std::abs(d[k] - 1.0) <= 1e-3, "order " + std::to_string(k) + " error " + std::to_string(d[k] - 1.0));
  }
  const auto& v = R.verification;
  o.require(v.ladder_decreasing, "ladder not decreasing");
  o.require(std::isfinite(v.growth_C) && v.growth_C > 0, "growth constant");
  o.require(v.growth_trend.verdict != Verdict::Fails, "growth trend fails");
  return o;
}

Outcome extension_linearity() {
  Outcome o;
  const auto E = CompactSet1D::make({0.0, 1.0});
  ExtendConfig cfg;
  cfg.L = 1.0;
  const Jet G = sample_jet(analytic::Sin{}, E, 16);
  const Jet H = sample_jet(analytic::Exp{}, E, 16);
  const auto RG = extend_jet(G, omega2_matrix(), cfg);
  const auto RH = extend_jet(H, omega2_matrix(), cfg);
  const auto RS = extend_jet(G.scaled(2).plus(H.scaled(-3)), omega2_matrix(), cfg);
  std::vector<double> err(5, 0.0), scale(5, 0.0);
  for (int i = 0; i <= 1000; ++i) {
    const double x = -1.0 + 3.0 * i / 1000;
    const auto a = RG.f->derivs(x, 4);
    const auto b = RH.f->derivs(x, 4);
    const auto c = RS.f->derivs(x, 4);
    for (int k = 0; k <= 4; ++k) {
      err[k] = std::max(err[k], std::abs(c[k] - (2 * a[k] - 3 * b[k])));
      scale[k] = std::max({scale[k], 1.0, std::abs(a[k]), std::abs(b[k])});
    }
  }
  for (int k = 0; k <= 4; ++k)
    o.require(err[k] <= 1e-9 * scale[k], "order " + std::to_string(k) + " relative " + std::to_string(err[k] / scale[k]));
  return o;
}

Outcome extension_suite() {
  Outcome o;
  for (const auto& [name, part] : std::vector<std::pair<std::string, std::function<Outcome()>>>{
           {"polynomial", extension_polynomial}, {"exp", extension_exp}, {"linearity", extension_linearity}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome p = part();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(p.ok, name + ": " + p.detail);
    o.require(secs < 60.0, name + " runtime");
  }
  return o;
}

Outcome decision_coherence() {
  Outcome o;
  std::vector<std::pair<std::string, WeightMatrix>> mats;
  mats.emplace_back("omega_2", *omega2_matrix());
  mats.emplace_back("omega_3", associated_matrix(WeightFunction::omega_s(3), default_param_grid(), 512));
  mats.emplace_back("gevrey(2)", WeightMatrix::assemble({1.0}, {make_sequence(family::Gevrey{2.0}, 512)}));
  mats.emplace_back("gevrey(1.5)", WeightMatrix::assemble({1.0}, {make_sequence(family::Gevrey{1.5}, 512)}));
  for (const auto& [name, N] : mats) {
    const TailFormsReport r = check_tail_forms(N);
    if (r.applicable()) o.require(r.agree(), name + " tail forms disagree");
  }
  o.require(decide_extension_property(*omega2_matrix(), WeightFunction::omega_s(2)).answer == Answer::Yes, "omega_2 not YES");
  o.require(decide_extension_property(mats[2].second).answer == Answer::Yes, "gevrey(2) not YES");
  const PairDecision p = decide_pair(make_sequence(family::Gevrey{1.0}, 512), make_sequence(family::Gevrey{2.0}, 512));
  o.require(p.holds() && p.tail_condition.witness_constant && p.quotient_condition.witness_constant,
            "gevrey(1) into gevrey(2)");
  return o;
}

Outcome taylor_difference() {
  Outcome o;
  const auto Nm = omega2_matrix();
  const Jet H = sample_jet(analytic::Exp{}, CompactSet1D::make({0.0, 1.0}), 16);
  const Descendant S = descend(Nm->row(0));
  const FittedJetConstants fit = fit_jet_constants(H, S.small_s);
  const auto R = extend_jet(H, Nm);  // searched L and D1 for the record
  std::mt19937 gen(2024);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t a1 = gen() % H.size();
    const std::size_t a2 = gen() % H.size();
    const int p = static_cast<int>(gen() % 16);
    const int k = static_cast<int>(gen() % (p + 1));
    const double x = std::uniform_real_distribution<double>(-1.0, 2.0)(gen);
    const auto [lhs, rhs] = check_taylor_difference_bound(H, S.small_s, fit.C, fit.rho, a1, a2, p, k, x);
    if (!(lhs <= rhs)) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(R.verification.taylor_jumps.ok(), "extension-side Taylor checks");
  o.require(std::isfinite(R.D1), "D1");
  return o;
}

}  // namespace

int main() {
  run(1, 5.0, coherence);
  run(2, 10.0, associated_identities);
  run(3, 0.0, descendant_suite);
  run(4, 0.0, omega_s_properties);
  run(5, 0.0, cutoffs);
  run(6, 0.0, partitions);
  run(7, 180.0, extension_suite);
  run(8, 0.0, decision_coherence);
  run(9, 0.0, taylor_difference);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
