#include "ultrajet/seqcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ultrajet/error.hpp"

namespace ultrajet {

namespace {

constexpr double kTieTol = 1e-12;

double tol_for(double x) { return kTieTol * std::max(1.0, std::abs(x)); }

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// WeightSequence

WeightSequence WeightSequence::from_log_values(std::vector<double> log_M, FamilyTag tag) {
  if (log_M.size() < 2) throw Error(ErrorCode::InvalidArgument, "sequence needs K >= 1");
  if (std::abs(log_M[0]) > 1e-12) throw Error(ErrorCode::NotNormalized, "M_0 must equal 1");
  WeightSequence w;
  w.log_M_ = std::move(log_M);
  w.log_M_[0] = 0.0;
  w.log_mu_.assign(w.log_M_.size(), 0.0);
  for (std::size_t k = 1; k < w.log_M_.size(); ++k)
    w.log_mu_[k] = w.log_M_[k] - w.log_M_[k - 1];
  w.tag_ = std::move(tag);
  w.validate();
  return w;
}

WeightSequence WeightSequence::from_log_quotients(std::vector<double> log_mu, FamilyTag tag) {
  if (log_mu.size() < 2) throw Error(ErrorCode::InvalidArgument, "sequence needs K >= 1");
  WeightSequence w;
  w.log_mu_ = std::move(log_mu);
  w.log_mu_[0] = 0.0;
  w.log_M_.assign(w.log_mu_.size(), 0.0);
  for (std::size_t k = 1; k < w.log_mu_.size(); ++k)
    w.log_M_[k] = w.log_M_[k - 1] + w.log_mu_[k];
  w.tag_ = std::move(tag);
  w.validate();
  return w;
}

void WeightSequence::validate() const {
  for (std::size_t k = 0; k < log_M_.size(); ++k) {
    if (!std::isfinite(log_M_[k]) || !std::isfinite(log_mu_[k]))
      throw Error(ErrorCode::NonPositive, "non-finite entry at k=" + std::to_string(k));
  }
  for (std::size_t k = 1; k < log_mu_.size(); ++k) {
    if (log_mu_[k] < log_mu_[k - 1] - tol_for(log_mu_[k - 1])) {
      throw Error(ErrorCode::NonLogConvex,
                  "quotient decreases at k=" + std::to_string(k));
    }
  }
}

double WeightSequence::log_m(int k) const { return log_M(k) - std::lgamma(k + 1.0); }
double WeightSequence::M(int k) const { return std::exp(log_M(k)); }
double WeightSequence::mu(int k) const { return std::exp(log_mu(k)); }

WeightSequence WeightSequence::truncated(int K) const {
  if (K < 1 || K > this->K()) throw Error(ErrorCode::InvalidArgument, "bad truncation");
  WeightSequence w = *this;
  w.log_M_.resize(static_cast<std::size_t>(K) + 1);
  w.log_mu_.resize(static_cast<std::size_t>(K) + 1);
  return w;
}

WeightSequence WeightSequence::rescaled(double c) const {
  if (!(c > 0)) throw Error(ErrorCode::InvalidArgument, "rescale factor must be positive");
  std::vector<double> lm = log_mu_;
  for (std::size_t k = 1; k < lm.size(); ++k) lm[k] += std::log(c);
  // mu_0 stays 1, so c < 1 may break mu_1 >= mu_0; that is the caller's concern.
  WeightSequence w;
  w.log_mu_ = std::move(lm);
  w.log_M_.assign(w.log_mu_.size(), 0.0);
  for (std::size_t k = 1; k < w.log_mu_.size(); ++k) w.log_M_[k] = w.log_M_[k - 1] + w.log_mu_[k];
  w.tag_ = tag_;
  w.tag_.params["rescale"] = c;
  return w;
}

bool WeightSequence::root_diverges_on_prefix() const {
  const double first = log_M(1);
  const double last = log_M(K()) / K();
  return last - first >= std::log(4.0);
}

WeightSequence make_sequence(const FamilySpec& spec, int K) {
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "K must be >= 2");
  return std::visit(
      [K](const auto& f) -> WeightSequence {
        using T = std::decay_t<decltype(f)>;
        std::vector<double> lmu(static_cast<std::size_t>(K) + 1, 0.0);
        if constexpr (std::is_same_v<T, family::Gevrey>) {
          if (!(f.s > 0)) throw Error(ErrorCode::InvalidArgument, "gevrey s must be > 0");
          for (int k = 1; k <= K; ++k) lmu[static_cast<std::size_t>(k)] = f.s * std::log(double(k));
          return WeightSequence::from_log_quotients(std::move(lmu), {"gevrey", {{"s", f.s}}});
        } else if constexpr (std::is_same_v<T, family::QGevrey>) {
          if (!(f.q > 0)) throw Error(ErrorCode::NonPositive, "qgevrey q must be > 0");
          for (int k = 1; k <= K; ++k)
            lmu[static_cast<std::size_t>(k)] = (2.0 * k - 1.0) * std::log(f.q);
          return WeightSequence::from_log_quotients(std::move(lmu), {"qgevrey", {{"q", f.q}}});
        } else if constexpr (std::is_same_v<T, family::PowerLog>) {
          if (!(f.A > 0)) throw Error(ErrorCode::NonPositive, "powerlog A must be > 0");
          for (int k = 1; k <= K; ++k)
            lmu[static_cast<std::size_t>(k)] =
                (std::pow(double(k), f.p) - std::pow(k - 1.0, f.p)) * std::log(f.A);
          return WeightSequence::from_log_quotients(std::move(lmu),
                                                    {"powerlog", {{"A", f.A}, {"p", f.p}}});
        } else {
          const auto& v = f.values;
          if (v.size() < 3) throw Error(ErrorCode::InvalidArgument, "table needs >= 3 values");
          const std::size_t n = std::min(v.size(), static_cast<std::size_t>(K) + 1);
          std::vector<double> lM(n);
          for (std::size_t k = 0; k < n; ++k) {
            if (!(v[k] > 0) || !std::isfinite(v[k]))
              throw Error(ErrorCode::NonPositive, "table entry " + std::to_string(k));
            lM[k] = std::log(v[k]);
          }
          return WeightSequence::from_log_values(std::move(lM), {"table", {}});
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Associated functions

HResult h_assoc_log(const WeightSequence& M, double log_t) {
  double best = INFINITY;
  for (int k = 0; k <= M.K(); ++k) best = std::min(best, M.log_M(k) + k * log_t);
  int arg = 0;
  for (int k = 0; k <= M.K(); ++k) {
    if (M.log_M(k) + k * log_t <= best + tol_for(best)) {
      arg = k;
      break;
    }
  }
  return {std::exp(best), best, arg, arg < M.K()};
}

HResult h_assoc(const WeightSequence& M, double t) {
  if (!(t > 0)) throw Error(ErrorCode::InvalidArgument, "h_assoc needs t > 0");
  return h_assoc_log(M, std::log(t));
}

int gamma_count_log(const WeightSequence& M, double log_t) {
  const double target = -log_t;
  const auto& lmu = M.log_quotients();
  if (lmu.back() < target - tol_for(target))
    throw Error(ErrorCode::PrefixExhausted, "mu_K < 1/t");
  // first k+1 in [1, K] with log mu_{k+1} >= target
  auto it = std::lower_bound(lmu.begin() + 1, lmu.end(), target - tol_for(target));
  return static_cast<int>(it - lmu.begin()) - 1;
}

int gamma_count(const WeightSequence& M, double t) {
  if (!(t > 0)) throw Error(ErrorCode::InvalidArgument, "gamma_count needs t > 0");
  return gamma_count_log(M, std::log(t));
}

int sigma_count_log(const WeightSequence& M, double log_t) {
  const auto& lmu = M.log_quotients();
  if (log_t >= lmu.back()) throw Error(ErrorCode::PrefixExhausted, "t >= mu_K");
  auto it = std::upper_bound(lmu.begin() + 1, lmu.end(), log_t + tol_for(log_t));
  return static_cast<int>(it - lmu.begin()) - 1;
}

int sigma_count(const WeightSequence& M, double t) {
  if (!(t > 0)) return 0;
  return sigma_count_log(M, std::log(t));
}

double omega_assoc_log(const WeightSequence& M, double log_t) {
  const int n = sigma_count_log(M, log_t);
  double w = 0.0;
  for (int k = 1; k <= n; ++k) w += log_t - M.log_mu(k);
  return std::max(w, 0.0);
}

double omega_assoc(const WeightSequence& M, double t) {
  if (!(t > 0)) throw Error(ErrorCode::InvalidArgument, "omega_assoc needs t > 0");
  return omega_assoc_log(M, std::log(t));
}

TailSums reciprocal_tail_sums(const WeightSequence& N) {
  const int K = N.K();
  TailSums ts;
  ts.suffix.assign(static_cast<std::size_t>(K) + 2, 0.0);

  std::vector<double> xs;
  std::vector<double> ys;
  for (int j = std::max(2, 3 * K / 4); j <= K; ++j) {
    xs.push_back(std::log(double(j)));
    ys.push_back(-N.log_mu(j));
  }
  const LineFit fit = least_squares(xs, ys);
  ts.decay_exponent = -fit.slope;
  if (ts.decay_exponent > 1.0) {
    const double b = ts.decay_exponent;
    ts.tail_bound = std::exp(fit.intercept + (1.0 - b) * std::log(double(K)) - std::log(b - 1.0));
  } else {
    ts.tail_bound = INFINITY;
  }

  // Kahan-compensated reverse accumulation
  double sum = 0.0;
  double comp = 0.0;
  for (int j = K; j >= 1; --j) {
    const double y = std::exp(-N.log_mu(j)) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    ts.suffix[static_cast<std::size_t>(j)] = sum + ts.tail_bound;
  }
  ts.suffix.resize(static_cast<std::size_t>(K) + 1);
  ts.partial_sum = sum;
  return ts;
}

// ---------------------------------------------------------------------------
// Growth conditions

namespace {

CheckReport judge_vec(const std::vector<double>& lr, const std::vector<int>& idx, int K,
                      const JudgeOptions& opts) {
  return judge_bounded(std::span<const double>(lr), std::span<const int>(idx), K, opts);
}

// C_n = max_{j+k=n} ((a_n - b_j - b_k)/n), clamped at 0, for n = 2..K.
void pairwise_constants(const std::vector<double>& a, const std::vector<double>& b, int jmin,
                        std::vector<double>& out, std::vector<int>& idx) {
  const int K = static_cast<int>(a.size()) - 1;
  for (int n = 2; n <= K; ++n) {
    double best = 0.0;
    for (int j = jmin; j <= n - jmin; ++j)
      best = std::max(best, (a[static_cast<std::size_t>(n)] - b[static_cast<std::size_t>(j)] -
                             b[static_cast<std::size_t>(n - j)]) / n);
    out.push_back(best);
    idx.push_back(n);
  }
}

// smallest log C in [0, hi] with pred(log C) true; pred monotone. NaN if none.
template <class Pred>
double bisect_log_constant(Pred pred, double hi) {
  if (pred(0.0)) return 0.0;
  if (!(hi > 0) || !pred(hi)) return NAN;
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace

ModerateGrowthReport check_moderate_growth(const WeightSequence& M, const JudgeOptions& opts) {
  const int K = M.K();
  if (K < 8) throw Error(ErrorCode::InvalidArgument, "moderate growth check needs K >= 8");
  ModerateGrowthReport rep;
  const double log_cap_plus = std::log(opts.cap) + 1.0;

  {  // (0) and (1)
    std::vector<double> lm(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) lm[static_cast<std::size_t>(k)] = M.log_m(k);
    std::vector<double> c0;
    std::vector<int> i0;
    pairwise_constants(lm, lm, 1, c0, i0);
    rep.conditions["moderate-0"] = judge_vec(c0, i0, K, opts);
    std::vector<double> c1;
    std::vector<int> i1;
    pairwise_constants(M.log_values(), M.log_values(), 1, c1, i1);
    rep.conditions["moderate-1"] = judge_vec(c1, i1, K, opts);
  }
  {  // (2) mu_k <~ M_k^{1/k}
    std::vector<double> lr;
    std::vector<int> idx;
    for (int k = 1; k <= K; ++k) {
      lr.push_back(M.log_mu(k) - M.log_M(k) / k);
      idx.push_back(k);
    }
    rep.conditions["moderate-2"] = judge_vec(lr, idx, K, opts);
  }
  {  // (3) mu_{2k} <~ mu_k
    std::vector<double> lr;
    std::vector<int> idx;
    for (int k = 1; 2 * k <= K; ++k) {
      lr.push_back(M.log_mu(2 * k) - M.log_mu(k));
      idx.push_back(k);
    }
    rep.conditions["moderate-3"] = judge_vec(lr, idx, K, opts);
  }
  {  // (4) 2 Sigma(t) <= Sigma(Ct): sup of required C on [mu_j, mu_{j+1}) sits at t = mu_j
    std::vector<double> lr;
    std::vector<int> idx;
    for (int j = 1; 2 * j <= K; ++j) {
      const double log_t = M.log_mu(j);
      const int sig = sigma_count_log(M, log_t);
      if (2 * sig > K) break;
      lr.push_back(std::max(0.0, M.log_mu(2 * sig) - log_t));
      idx.push_back(j);
    }
    rep.conditions["moderate-4"] = judge_vec(lr, idx, K, opts);
  }
  {  // (5) 2 omega(t) <= omega(Ct) + C on a log grid of t
    const double lo = M.log_mu(1);
    const double hi = M.log_mu(K / 2);
    std::vector<double> lr;
    std::vector<int> idx;
    if (hi > lo) {
      const auto grid = log_grid(lo, hi, 256);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double lt = grid[g];
        const double two_omega = 2.0 * omega_assoc_log(M, lt);
        const double c_hi = std::min(M.log_mu(K) - lt - 1e-9, log_cap_plus);
        const double c = bisect_log_constant(
            [&](double lc) { return omega_assoc_log(M, lt + lc) + std::exp(lc) >= two_omega; },
            c_hi);
        lr.push_back(std::isnan(c) ? log_cap_plus : c);
        idx.push_back(static_cast<int>(g));
      }
    }
    rep.conditions["moderate-5"] = judge_vec(lr, idx, K, opts);
  }

  const Verdict v0 = rep.conditions["moderate-0"].verdict;
  std::ostringstream diag;
  for (const auto& [id, r] : rep.conditions) {
    if (r.verdict != v0) rep.coherent = false;
    diag << id << '=' << to_string(r.verdict) << ' ';
  }
  rep.diagnostics = diag.str();
  if (rep.coherent) {
    rep.summary = rep.conditions["moderate-3"];
  } else {
    rep.summary.verdict = Verdict::Inconclusive;
    rep.summary.prefix_K = K;
    rep.summary.note = "equivalent conditions disagree on prefix: " + rep.diagnostics;
  }
  return rep;
}

CheckReport check_almost_concave(const WeightSequence& M, const JudgeOptions& opts) {
  std::vector<double> lr;
  std::vector<int> idx;
  for (int k = 1; k < M.K(); ++k) {
    lr.push_back(M.log_mu(k + 1) - M.log_mu(k));
    idx.push_back(k);
  }
  return judge_vec(lr, idx, M.K(), opts);
}

MixedGrowthReport check_mixed_growth(const WeightSequence& M, const WeightSequence& Mdot,
                                     const JudgeOptions& opts) {
  const int K = std::min(M.K(), Mdot.K());
  MixedGrowthReport rep;
  const double log_cap_plus = std::log(opts.cap) + 1.0;
  {
    std::vector<double> lr;
    std::vector<int> idx;
    for (int k = 1; 2 * k <= K; ++k) {
      lr.push_back(M.log_mu(2 * k) - Mdot.log_mu(k));
      idx.push_back(k);
    }
    rep.quotient_doubling = judge_vec(lr, idx, K, opts);
  }
  {
    // t from 1/mu_{K/4} (trusted region of h_M) up to 1/mu_1
    const double lo = -M.log_mu(std::max(1, K / 4));
    const double hi = -M.log_mu(1);
    std::vector<double> lr;
    std::vector<int> idx;
    if (hi > lo) {
      const auto grid = log_grid(lo, hi, 200);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double lh = h_assoc_log(M, grid[g]).log_value;
        const double c = bisect_log_constant(
            [&](double lc) { return lh <= 2.0 * h_assoc_log(Mdot, grid[g] + lc).log_value + 1e-12; },
            log_cap_plus);
        lr.push_back(std::isnan(c) ? log_cap_plus : c);
        idx.push_back(static_cast<int>(g));
      }
    }
    rep.h_square = judge_vec(lr, idx, K, opts);
  }
  {
    rep.gamma_doubling.prefix_K = K;
    const double lo = -Mdot.log_mu(std::max(1, K / 4));
    const double hi = 0.0;
    const auto grid = log_grid(lo, hi, 200);
    int first_bad = -1;
    for (int e = 1; e <= 30; ++e) {
      const double log_lambda = -e * std::log(2.0);
      bool ok = true;
      int checked = 0;
      for (std::size_t g = 0; g < grid.size() && ok; ++g) {
        int gd = 0;
        int gm = 0;
        try {
          gd = gamma_count_log(Mdot, grid[g]);
          gm = gamma_count_log(M, grid[g] + log_lambda);
        } catch (const Error&) {
          continue;
        }
        ++checked;
        if (2 * gd > gm) {
          ok = false;
          if (first_bad < 0) first_bad = static_cast<int>(g);
        }
      }
      if (ok && checked > static_cast<int>(grid.size()) / 4) {
        rep.gamma_doubling.verdict = Verdict::HoldsUpToK;
        rep.gamma_doubling.witness_constant = std::exp(log_lambda);
        break;
      }
    }
    if (!rep.gamma_doubling.holds()) {
      rep.gamma_doubling.verdict = Verdict::Fails;
      rep.gamma_doubling.counterexample_index = std::max(first_bad, 0);
      rep.gamma_doubling.note = "no lambda in {2^-1..2^-30} works";
    }
  }
  {
    std::vector<double> lr;
    std::vector<int> idx;
    std::vector<double> a(M.log_values().begin(), M.log_values().begin() + K + 1);
    std::vector<double> b(Mdot.log_values().begin(), Mdot.log_values().begin() + K + 1);
    pairwise_constants(a, b, 0, lr, idx);
    rep.product_bound = judge_vec(lr, idx, K, opts);
  }
  if (rep.quotient_doubling.holds() && !(rep.h_square.holds() && rep.product_bound.holds()))
    rep.chain_consistent = false;
  if (rep.h_square.holds() && !rep.product_bound.holds()) rep.chain_consistent = false;
  return rep;
}

CheckReport check_nonquasianalytic(const WeightSequence& N) {
  const int K = N.K();
  if (K < 8) throw Error(ErrorCode::InvalidArgument, "non-quasianalyticity check needs K >= 8");
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = K / 2; k <= K; ++k) {
    xs.push_back(std::log(double(k)));
    ys.push_back(-N.log_mu(k));
  }
  const double slope = least_squares(xs, ys).slope;
  const TailSums ts = reciprocal_tail_sums(N);
  CheckReport rep;
  rep.prefix_K = K;
  std::ostringstream note;
  note << "log-log slope " << slope << ", partial sum " << ts.partial_sum;
  rep.note = note.str();
  if (slope <= -1.1) {
    rep.verdict = Verdict::HoldsUpToK;
    rep.witness_constant = ts.partial_sum + ts.tail_bound;
  } else if (slope >= -1.0) {
    rep.verdict = Verdict::Fails;
    rep.counterexample_index = K;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

CheckReport check_quotient_below(const WeightSequence& M, const WeightSequence& N,
                                 const JudgeOptions& opts) {
  const int K = std::min(M.K(), N.K());
  std::vector<double> lr;
  std::vector<int> idx;
  for (int k = 1; k <= K; ++k) {
    lr.push_back(M.log_mu(k) - N.log_mu(k));
    idx.push_back(k);
  }
  return judge_vec(lr, idx, K, opts);
}

EquivalenceReport check_equivalence(const WeightSequence& M, const WeightSequence& N,
                                    const JudgeOptions& opts) {
  const int K = std::min(M.K(), N.K());
  EquivalenceReport rep;
  std::vector<double> up;
  std::vector<double> down;
  std::vector<int> idx;
  for (int k = 1; k <= K; ++k) {
    const double d = M.log_M(k) / k - N.log_M(k) / k;
    up.push_back(d);
    down.push_back(-d);
    idx.push_back(k);
  }
  rep.m_below_n = judge_vec(up, idx, K, opts);
  rep.n_below_m = judge_vec(down, idx, K, opts);
  const CheckReport q1 = check_quotient_below(M, N, opts);
  const CheckReport q2 = check_quotient_below(N, M, opts);
  rep.quotients.prefix_K = K;
  if (q1.holds() && q2.holds()) {
    rep.quotients.verdict = Verdict::HoldsUpToK;
    rep.quotients.witness_constant = std::max(*q1.witness_constant, *q2.witness_constant);
  } else {
    rep.quotients = q1.holds() ? q2 : q1;
  }
  return rep;
}

}  // namespace ultrajet
