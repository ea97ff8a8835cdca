#include "ultrajet/decide.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ultrajet/descend.hpp"
#include "ultrajet/error.hpp"

namespace ultrajet {

namespace {

double log_add_one(double log_a) {  // log(1 + e^{log_a})
  return log_a > 0 ? log_a + std::log1p(std::exp(-log_a)) : std::log1p(std::exp(log_a));
}

double log_expm1(double x) {  // log(e^x - 1), x > 0
  return x > 30 ? x : std::log(std::expm1(x));
}

CheckReport judge1(const std::vector<double>& lr, int K, const JudgeOptions& opts) {
  return judge_bounded(std::span<const double>(lr), K, opts);
}

// search order for witness rows: same row, then larger params, then smaller
std::vector<std::size_t> witness_order(std::size_t i, std::size_t n) {
  std::vector<std::size_t> order{i};
  for (std::size_t j = i + 1; j < n; ++j) order.push_back(j);
  for (std::size_t j = i; j-- > 0;) order.push_back(j);
  return order;
}

std::vector<TailSums> all_tails(const WeightMatrix& N) {
  std::vector<TailSums> t;
  for (const auto& r : N.rows) t.push_back(reciprocal_tail_sums(r));
  return t;
}

ExtensionVerdict fold(std::string id, const std::vector<std::optional<std::pair<std::size_t, double>>>& w,
                      std::vector<double> p_used, int K, bool allow_saturation) {
  ExtensionVerdict v;
  v.condition_id = std::move(id);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i]) continue;
    v.witnessing_pairs.emplace_back(i, w[i]->first);
    v.constants.push_back(w[i]->second);
  }
  v.p_used = std::move(p_used);
  if (allow_saturation) {
    std::vector<bool> sat(w.size(), false);
    v.verdict = combine_row_witnesses(w, sat, K);
  } else {
    v.verdict.prefix_K = K;
    const auto missing = std::find_if(w.begin(), w.end(), [](const auto& x) { return !x; });
    if (missing == w.end()) {
      v.verdict.verdict = Verdict::HoldsUpToK;
      v.verdict.witness_constant = v.constants.empty() ? 1.0 : *std::max_element(v.constants.begin(), v.constants.end());
    } else {
      v.verdict.verdict = Verdict::NotWitnessedInSample;
      v.verdict.note = "no witnessing row for row " + std::to_string(missing - w.begin());
    }
  }
  return v;
}

}  // namespace

CheckReport check_quotient_growth(const WeightSequence& N, const JudgeOptions& opts) {
  const int K = N.K();
  CheckReport rep;
  rep.prefix_K = K;
  if (K >= 8 && check_nonquasianalytic(N).fails()) {
    rep.note = "input is quasianalytic on the prefix";
    return rep;
  }
  const TailSums ts = reciprocal_tail_sums(N);
  std::vector<double> lr;
  double log_cmax = -INFINITY;
  double base = 0.0;
  for (int k = 1; k < K; ++k) {
    const double lq = N.log_mu(k + 1) - N.log_mu(k);
    const double la = N.log_mu(k + 1) - std::log(k + 1.0) + std::log(ts.suffix[static_cast<std::size_t>(k) + 1]);
    // exact minimal C at index k
    const double log_c = lq > 0 ? log_expm1(lq) - log_add_one(la) : -INFINITY;
    log_cmax = std::max(log_cmax, log_c);
    // judge log(1 + C_k) relative to the first index: the row's own scale is not growth
    const double l1 = log_add_one(log_c);
    if (k == 1) base = l1;
    lr.push_back(l1 - base);
  }
  rep = judge1(lr, K, opts);
  if (rep.holds()) {
    int j = -10;
    while (std::ldexp(1.0, j) < std::exp(log_cmax) && j < 1100) ++j;
    rep.witness_constant = std::ldexp(1.0, j);
  }
  // equivalent form: sigma_{k+1} <~ sigma_k on the descendant
  try {
    const Descendant D = descend(N);
    const CheckReport s = check_almost_concave(D.sigma, opts);
    rep.note = std::string("descendant cross-check ") + std::string(to_string(s.verdict));
    if (s.verdict != rep.verdict) rep.note += " (disagrees)";
  } catch (const Error& e) {
    rep.note = std::string("descendant cross-check unavailable: ") + e.what();
  }
  return rep;
}

CheckReport check_tail_sum(const WeightSequence& M, const WeightSequence& N, const JudgeOptions& opts) {
  if (N.K() >= 8 && check_nonquasianalytic(N).fails())
    throw Error(ErrorCode::QuasianalyticInput, "target sequence is quasianalytic");
  const TailSums ts = reciprocal_tail_sums(N);
  if (!std::isfinite(ts.tail_bound)) throw Error(ErrorCode::QuasianalyticInput, "tail does not converge");
  const int K = std::min(M.K(), N.K()) / 2;
  std::vector<double> lr;
  for (int k = 1; k <= K; ++k)
    lr.push_back(std::log(ts.suffix[static_cast<std::size_t>(k)]) - std::log(double(k)) + M.log_mu(k));
  CheckReport rep = judge1(lr, K, opts);
  std::ostringstream os;
  os << "tail bound beyond K: " << ts.tail_bound;
  rep.note = os.str();
  return rep;
}

double log_phi_pk(const WeightSequence& M, const WeightSequence& N, double p, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "phi_pk needs k >= 1");
  if (!(p > 0)) throw Error(ErrorCode::InvalidArgument, "phi_pk needs p > 0");
  double best = -INFINITY;
  const double top = M.log_M(k) - k * std::log(p);
  for (int j = 0; j < k; ++j) best = std::max(best, (top - N.log_M(j)) / (k - j));
  return best;
}

double phi_pk(const WeightSequence& M, const WeightSequence& N, double p, int k) {
  return std::exp(log_phi_pk(M, N, p, k));
}

ExtensionVerdict check_root_cover(const WeightMatrix& N, const JudgeOptions& opts) {
  std::vector<std::optional<std::pair<std::size_t, double>>> w;
  for (std::size_t i = 0; i < N.size(); ++i) w.push_back(find_cover_row(N, i, opts));
  return fold("root_cover", w, {}, N.K(), true);
}

ExtensionVerdict check_quotient_tail(const WeightMatrix& N, const JudgeOptions& opts) {
  const int K = N.K();
  const auto tails = all_tails(N);
  std::vector<std::optional<std::pair<std::size_t, double>>> w(N.size());
  for (std::size_t i = 0; i < N.size(); ++i) {
    for (std::size_t j : witness_order(i, N.size())) {
      if (!std::isfinite(tails[j].tail_bound)) continue;
      std::vector<double> lr;
      for (int k = 1; k <= K / 2; ++k)
        lr.push_back(std::log(tails[j].suffix[static_cast<std::size_t>(k)]) - std::log(double(k)) +
                     N.row(i).log_mu(k));
      const CheckReport r = judge1(lr, K, opts);
      if (r.holds()) {
        w[i] = std::make_pair(j, *r.witness_constant);
        break;
      }
    }
  }
  return fold("quotient_tail", w, {}, K, false);
}

ExtensionVerdict check_phi_tail(const WeightMatrix& N, const std::vector<double>& p_grid,
                           const JudgeOptions& opts) {
  const int K = N.K();
  const auto tails = all_tails(N);
  std::vector<std::optional<std::pair<std::size_t, double>>> w(N.size());
  std::vector<double> p_used(N.size(), 0.0);
  for (std::size_t i = 0; i < N.size(); ++i) {
    for (std::size_t j : witness_order(i, N.size())) {
      if (!std::isfinite(tails[j].tail_bound)) continue;
      for (double p : p_grid) {
        std::vector<double> lr;
        for (int k = 1; k <= K / 2; ++k)
          lr.push_back(std::log(tails[j].suffix[static_cast<std::size_t>(k)]) - std::log(double(k)) +
                       log_phi_pk(N.row(i), N.row(j), p, k));
        const CheckReport r = judge1(lr, K, opts);
        if (r.holds()) {
          w[i] = std::make_pair(j, *r.witness_constant);
          p_used[i] = p;
          break;
        }
      }
      if (w[i]) break;
    }
  }
  return fold("phi_tail", w, std::move(p_used), K, false);
}

TailFormsReport check_tail_forms(const WeightMatrix& N, const JudgeOptions& opts) {
  TailFormsReport rep{check_root_cover(N, opts), check_phi_tail(N, {1, 2, 4, 8, 16}, opts), check_quotient_tail(N, opts)};
  if (rep.applicable() && !rep.agree()) {
    rep.phi_form.verdict.note += " [diagnostic: disagrees with quotient form although the root cover condition holds]";
  }
  return rep;
}

std::string_view to_string(Answer a) noexcept {
  switch (a) {
    case Answer::Yes: return "YES";
    case Answer::Warn: return "WARN";
  }
  return "?";
}

DecisionReport decide_extension_property(const WeightMatrix& N, const std::optional<WeightFunction>& omega,
                                         const JudgeOptions& opts) {
  DecisionReport rep;
  rep.admissibility = check_admissible_matrix(N, opts);
  if (!rep.admissibility.admissible_in_sample()) {
    std::ostringstream os;
    os << "conditions:";
    for (std::size_t i = 0; i < 5; ++i)
      os << " (" << i + 1 << ")=" << to_string(rep.admissibility.conditions[i].verdict);
    throw Error(ErrorCode::NotAdmissibleInSample, os.str());
  }
  rep.characterization = check_quotient_tail(N, opts);
  bool yes = rep.characterization.verdict.holds();
  if (omega) {
    ExtensionVerdict v = check_quotient_tail(N, opts);
    v.condition_id = "all-x-exists-y";
    yes = yes && v.verdict.holds();
    rep.all_x_exists_y = std::move(v);
    rep.integral = check_omega_nonquasianalytic(*omega);
    yes = yes && rep.integral->shifted_bound.holds();
  }
  rep.answer = yes ? Answer::Yes : Answer::Warn;
  if (!yes) rep.note = "criterion not witnessed on the prefix; necessity is asymptotic, so this is a warning";
  return rep;
}

PairDecision decide_pair(const WeightSequence& M, const WeightSequence& N, const JudgeOptions& opts) {
  return {check_tail_sum(M, N, opts), check_quotient_below(M, N, opts)};
}

}  // namespace ultrajet
