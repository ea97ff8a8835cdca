#include <algorithm>
#include <cmath>
#include <sstream>

#include "ultrajet/error.hpp"
#include "ultrajet/extend.hpp"

namespace ultrajet {

namespace {

double log_sstar(const Descendant& S, int k) { return S.small_s.log_mu(k); }

// log of 1/h_s(t), never negative
double log_inv_h(const WeightSequence& s, double log_t) { return -h_assoc_log(s, log_t).log_value; }

// sum_{j >= m} 1/nudot_j, tail estimate included
double tail_from(const TailSums& ts, int m) {
  if (m < static_cast<int>(ts.suffix.size())) return ts.suffix[static_cast<std::size_t>(m)];
  return ts.tail_bound;
}

double ratio_sum(const Descendant& S, const WeightSequence& Ndot, const TailSums& ts, int p, double log_A) {
  const double ls = log_sstar(S, p + 1);
  // k < p: p terms of 1/(2p)
  double sum = 0.5;
  // k = p: (2p)^p / ((A/sigma*_{p+1})^{p+1} Ndot_{p+1})
  sum += std::exp(p * std::log(2.0 * p) - (p + 1) * (log_A - ls) - Ndot.log_M(p + 1));
  // k > p: sigma*_{p+1} / (A nudot_{k+1})
  sum += std::exp(ls - log_A) * tail_from(ts, p + 2);
  return sum;
}

}  // namespace

AlphaSequence alpha_sequence(const Descendant& S, const WeightSequence& Ndot, int p, double A, int K_out) {
  if (p < 1 || p + 1 > S.K_eff) throw Error(ErrorCode::InvalidArgument, "alpha index p out of range");
  if (!(A > 0)) throw Error(ErrorCode::InvalidArgument, "A must be positive");
  if (K_out > Ndot.K() || p + 1 > Ndot.K()) throw Error(ErrorCode::PrefixExhausted, "Ndot prefix too short");
  AlphaSequence a;
  a.p = p;
  a.A = A;
  const double lA = std::log(A);
  const double ls = log_sstar(S, p + 1);
  a.log_alpha.resize(static_cast<std::size_t>(K_out) + 1);
  for (int k = 0; k <= K_out; ++k)
    a.log_alpha[static_cast<std::size_t>(k)] = k <= p ? k * std::log(2.0 * p) : k * (lA - ls) + Ndot.log_M(k);
  a.ratio_sum = ratio_sum(S, Ndot, reciprocal_tail_sums(Ndot), p, lA);
  a.valid = a.ratio_sum <= 1.0;
  if (!a.valid)
    throw Error(ErrorCode::ATooSmall, "ratio sum " + std::to_string(a.ratio_sum) + " exceeds 1 at p = " + std::to_string(p));
  return a;
}

CutoffFamily::CutoffFamily(WeightSequence N, WeightSequence Ndot, int conv_depth)
    : N_(std::move(N)), Ndot_(std::move(Ndot)), S_(descend(N_)), conv_depth_(conv_depth) {
  if (conv_depth_ < 2) throw Error(ErrorCode::DepthInsufficient, "convolution depth below 2");
  if (Ndot_.K() < conv_depth_ + 2) throw Error(ErrorCode::PrefixExhausted, "Ndot prefix shorter than depth");
  delta_ = std::exp(log_inv_h(S_.small_s, std::log(1.0 / 3.0)));
  p_tested_ = std::min(S_.K_eff - 1, Ndot_.K() - 2);
  const TailSums ts = reciprocal_tail_sums(Ndot_);

  std::vector<double> log_inv_hp(static_cast<std::size_t>(p_tested_) + 1);
  for (int p = 1; p <= p_tested_; ++p)
    log_inv_hp[static_cast<std::size_t>(p)] = log_inv_h(S_.small_s, -std::log(3.0) - log_sstar(S_, p));

  auto valid = [&](double lA) {
    for (int p = 1; p <= p_tested_; ++p) {
      if (ratio_sum(S_, Ndot_, ts, p, lA) > 1.0) return false;
      const double slope = lA - log_sstar(S_, p + 1) - std::log(2.0 * p);
      for (int k = 1; k <= p; ++k)
        if (k * slope + Ndot_.log_M(k) + log_inv_hp[static_cast<std::size_t>(p)] < -1e-12) return false;
    }
    return true;
  };
  int j = 0;
  while (j <= 80 && !valid(j * std::log(2.0))) ++j;
  if (j > 80) throw Error(ErrorCode::ATooSmall, "no power-of-two A up to 2^80 validates the ratio sums");
  A_ = std::ldexp(1.0, j);
  B_ = 1.0 / (6.0 * delta_ * A_);
}

int CutoffFamily::select_p(double epsilon, double t) const {
  if (!(epsilon > 0) || !(t > 1)) throw Error(ErrorCode::InvalidArgument, "need epsilon > 0 and t > 1");
  const double eta = epsilon * (t - 1.0) / delta_;
  if (eta > 2.0 * A_) return 1;
  const double target = std::log(2.0 * A_ / eta);
  for (int p = 1; p <= p_tested_; ++p)
    if (log_sstar(S_, p + 1) >= target) return p;
  throw Error(ErrorCode::DepthInsufficient, "descendant prefix too short for eta = " + std::to_string(eta));
}

std::vector<double> CutoffFamily::widths(double epsilon, double t) const {
  const int p = select_p(epsilon, t);
  const AlphaSequence a = alpha_sequence(S_, Ndot_, p, A_, conv_depth_);
  std::vector<double> w;
  for (int k = 1; k <= conv_depth_; ++k)
    w.push_back((t - 1.0) * std::exp(a.log_alpha[static_cast<std::size_t>(k) - 1] - a.log_alpha[static_cast<std::size_t>(k)]));
  return w;
}

double CutoffFamily::log_bound(double epsilon, double t, int k) const {
  return k * std::log(epsilon) + Ndot_.log_M(k) + log_inv_h(S_.small_s, std::log(B_ * epsilon * (t - 1.0)));
}

const PiecewisePolynomial& CutoffFamily::build(double epsilon, double t) const {
  const int p = select_p(epsilon, t);
  const auto key = std::make_pair(p, t);
  if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
  const auto w = widths(epsilon, t);
  double total = 0.0;
  for (double x : w) total += x;
  if (total > (t - 1.0) * (1.0 + 1e-12))
    throw Error(ErrorCode::WidthBudget, "box widths sum to " + std::to_string(total));
  const double half = 0.5 * (t + 1.0);
  return cache_.emplace(key, smooth_indicator(-half, half, w)).first->second;
}

CutoffCheck verify_cutoff(const CutoffFamily& fam, double epsilon, double t, int max_order, int probes) {
  if (max_order > fam.conv_depth() - 2)
    throw Error(ErrorCode::DepthInsufficient, "derivative order needs convolution depth order + 2");
  const PiecewisePolynomial& phi = fam.build(epsilon, t);
  CutoffCheck c;
  c.max_order = max_order;
  c.probes = probes;
  c.support_ok = phi.support_lo() >= -t && phi.support_hi() <= t;
  // plateau pieces are the constant 1
  for (std::size_t i = 0; i < phi.pieces().size(); ++i) {
    const double lo = phi.breakpoints()[i];
    const double hi = phi.breakpoints()[i + 1];
    if (hi <= -1.0 || lo >= 1.0) continue;
    const auto& cf = phi.pieces()[i].coef();
    for (std::size_t j = 0; j < cf.size(); ++j) {
      const double target = j == 0 ? 1.0 : 0.0;
      if (std::abs(static_cast<double>(cf[j]) - target) > 1e-12) c.plateau_ok = false;
    }
  }
  const int G = 10 * probes;
  for (int i = 0; i <= G; ++i) {
    const double x = -1.1 * t + 2.2 * t * i / G;
    const double v = phi.eval(x);
    if (v < -1e-12 || v > 1.0 + 1e-12) c.range_ok = false;
    if (std::abs(x) <= 1.0 && std::abs(v - 1.0) > 1e-12) c.plateau_ok = false;
    if (std::abs(x) >= t && v != 0.0) c.support_ok = false;
  }
  std::vector<double> lb(static_cast<std::size_t>(max_order) + 1);
  for (int k = 0; k <= max_order; ++k) lb[static_cast<std::size_t>(k)] = fam.log_bound(epsilon, t, k);
  for (int i = 0; i < probes; ++i) {
    const double x = -t + 2.0 * t * (i + 0.5) / probes;
    const auto d = phi.derivs(x, max_order);
    for (int k = 0; k <= max_order; ++k) {
      const double v = std::abs(d[static_cast<std::size_t>(k)]);
      if (v == 0.0) continue;
      const double m = std::log(v) - lb[static_cast<std::size_t>(k)];
      c.worst_log_margin = std::max(c.worst_log_margin, m);
      if (m > 1e-9) ++c.bound_violations;
    }
  }
  return c;
}

}  // namespace ultrajet
