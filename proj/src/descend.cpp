#include "ultrajet/descend.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ultrajet/decide.hpp"
#include "ultrajet/error.hpp"

namespace ultrajet {

Descendant descend(const WeightSequence& N, const DescendOptions& opts) {
  const int K = N.K();
  const int K_eff = opts.K_eff > 0 ? opts.K_eff : K / 2;
  if (K_eff < 1 || K_eff > K) throw Error(ErrorCode::InvalidArgument, "K_eff out of range");

  double tail = 0.0;
  if (opts.tail_beyond_K) {
    tail = *opts.tail_beyond_K;
  } else {
    if (K >= 8 && check_nonquasianalytic(N).fails())
      throw Error(ErrorCode::QuasianalyticInput, "sum of 1/nu_k diverges on the prefix");
    const TailSums ts = reciprocal_tail_sums(N);
    if (!ts.reliable()) {
      std::ostringstream os;
      os << "tail bound " << ts.tail_bound << " vs partial sum " << ts.partial_sum;
      throw Error(std::isfinite(ts.tail_bound) ? ErrorCode::TailUnreliable : ErrorCode::QuasianalyticInput,
                  os.str());
    }
    tail = ts.tail_bound;
  }

  // suffix sums in the log domain, smallest terms first; 1/nu_j underflows on fast rows
  auto logaddexp = [](double x, double y) {
    if (x == -INFINITY) return y;
    if (y == -INFINITY) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
  };
  std::vector<double> log_tails(static_cast<std::size_t>(K) + 2, -INFINITY);
  log_tails[static_cast<std::size_t>(K) + 1] = tail > 0.0 ? std::log(tail) : -INFINITY;
  for (int j = K; j >= 1; --j)
    log_tails[static_cast<std::size_t>(j)] = logaddexp(log_tails[static_cast<std::size_t>(j) + 1], -N.log_mu(j));
  log_tails.resize(static_cast<std::size_t>(K_eff) + 2);
  std::vector<double> tails(log_tails.size());
  for (std::size_t j = 0; j < tails.size(); ++j) tails[j] = std::exp(log_tails[j]);

  std::vector<double> log_tau(static_cast<std::size_t>(K_eff) + 1, 0.0);
  std::vector<double> tau(static_cast<std::size_t>(K_eff) + 1, 0.0);
  for (int k = 1; k <= K_eff; ++k) {
    log_tau[static_cast<std::size_t>(k)] =
        logaddexp(std::log(double(k)) - N.log_mu(k), log_tails[static_cast<std::size_t>(k)]);
    tau[static_cast<std::size_t>(k)] = std::exp(log_tau[static_cast<std::size_t>(k)]);
  }

  std::vector<double> log_sigma(static_cast<std::size_t>(K_eff) + 1, 0.0);
  std::vector<double> log_sstar(static_cast<std::size_t>(K_eff) + 1, 0.0);
  std::vector<double> sigma_star(static_cast<std::size_t>(K_eff) + 1, 1.0);
  for (int k = 1; k <= K_eff; ++k) {
    const double ls = log_tau[1] + std::log(double(k)) - log_tau[static_cast<std::size_t>(k)];
    log_sigma[static_cast<std::size_t>(k)] = ls;
    log_sstar[static_cast<std::size_t>(k)] = ls - std::log(double(k));
    sigma_star[static_cast<std::size_t>(k)] = std::exp(log_sstar[static_cast<std::size_t>(k)]);
  }
  log_sigma[1] = 0.0;
  log_sstar[1] = 0.0;

  const double err = opts.tail_beyond_K ? 0.0 : tail;
  return Descendant{
      .K_eff = K_eff,
      .tau = std::move(tau),
      .tau_error = std::vector<double>(static_cast<std::size_t>(K_eff) + 1, err),
      .tails = std::move(tails),
      .log_tails = std::move(log_tails),
      .log_tau = std::move(log_tau),
      .sigma_star = std::move(sigma_star),
      .sigma = WeightSequence::from_log_quotients(std::move(log_sigma), {"descendant", {}}),
      .small_s = WeightSequence::from_log_quotients(std::move(log_sstar), {"descendant_small", {}}),
      .tail_truncation = K,
      .tail_bound = tail,
  };
}

namespace {

CheckReport judge_indexed(const std::vector<double>& lr, int K, const JudgeOptions& opts) {
  return judge_bounded(std::span<const double>(lr), K, opts);
}

}  // namespace

DescendantReport check_descendant(const WeightSequence& N, const Descendant& D,
                            const std::optional<WeightSequence>& Ndot, const JudgeOptions& opts) {
  DescendantReport rep;
  const int K = D.K_eff;
  // (1) sigma <~ nu
  rep.items[0] = check_quotient_below(D.sigma, N.truncated(K), opts);
  // (2) sum_{j>=k} 1/nu_j <~ k / sigma_k
  std::vector<double> lr2;
  for (int k = 1; k <= K; ++k)
    lr2.push_back(D.log_tails[static_cast<std::size_t>(k)] - std::log(double(k)) + D.sigma.log_mu(k));
  rep.items[1] = judge_indexed(lr2, K, opts);
  // (3) 1 <= sigma*_k nondecreasing
  {
    CheckReport& r = rep.items[2];
    r.prefix_K = K;
    r.verdict = Verdict::HoldsUpToK;
    r.witness_constant = D.sigma_star[1];
    for (int k = 1; k <= K; ++k) {
      const double s = D.sigma_star[static_cast<std::size_t>(k)];
      const bool bad = s < 1.0 - 1e-12 ||
                       (k > 1 && s < D.sigma_star[static_cast<std::size_t>(k) - 1] * (1.0 - 1e-12));
      if (bad) {
        r.verdict = Verdict::Fails;
        r.counterexample_index = k;
        r.witness_constant.reset();
        break;
      }
    }
  }
  // (4) sigma_{k+1} <~ sigma_k iff the ratio condition on nu
  {
    const CheckReport lhs = check_almost_concave(D.sigma, opts);
    const CheckReport rhs = check_quotient_growth(N, opts);
    CheckReport& r = rep.items[3];
    r = lhs;
    if (lhs.verdict != rhs.verdict) {
      r.verdict = Verdict::Inconclusive;
      r.note = std::string("sigma side ") + std::string(to_string(lhs.verdict)) + ", nu side " +
               std::string(to_string(rhs.verdict));
    } else if (rhs.witness_constant) {
      r.note = "ratio-condition constant " + std::to_string(*rhs.witness_constant);
    }
  }
  // (5) maximality: c*sigma for c in {2,4,8} must break (1) or (2) with the recorded witnesses
  {
    CheckReport& r = rep.items[4];
    r.prefix_K = K;
    if (!rep.items[0].holds() || !rep.items[1].holds()) {
      r.verdict = Verdict::Inconclusive;
      r.note = "items (1)/(2) not witnessed";
    } else {
      const double c1 = *rep.items[0].witness_constant;
      const double c2 = *rep.items[1].witness_constant;
      r.verdict = Verdict::HoldsUpToK;
      r.witness_constant = 1.0;
      for (double c : {2.0, 4.0, 8.0}) {
        bool breaks = false;
        for (int k = 1; k <= K && !breaks; ++k) {
          const double lmu = D.sigma.log_mu(k) + std::log(c);
          if (lmu > std::log(c1) + N.log_mu(k) + 1e-12) breaks = true;
          if (D.log_tails[static_cast<std::size_t>(k)] > std::log(c2) + std::log(double(k)) - lmu + 1e-12)
            breaks = true;
        }
        if (!breaks) {
          r.verdict = Verdict::Fails;
          r.counterexample_index = static_cast<int>(c);
          r.note = "scaled candidate satisfies both bounds";
          break;
        }
      }
    }
  }
  // (6) nu_{2k} <~ dot-nu_k implies sigma_{2k} <~ dot-sigma_k
  {
    CheckReport& r = rep.items[5];
    r.prefix_K = K;
    if (!Ndot) {
      r.verdict = Verdict::Inconclusive;
      r.note = "no companion sequence supplied";
    } else {
      const Descendant Dd = descend(*Ndot, {.K_eff = K, .tail_beyond_K = std::nullopt});
      std::vector<double> hyp;
      std::vector<double> lr;
      for (int k = 1; 2 * k <= K; ++k) {
        hyp.push_back(N.log_mu(2 * k) - Ndot->log_mu(k));
        lr.push_back(D.sigma.log_mu(2 * k) - Dd.sigma.log_mu(k));
      }
      const CheckReport h = judge_indexed(hyp, K, opts);
      if (!h.holds()) {
        r.verdict = Verdict::Inconclusive;
        r.note = "hypothesis nu_{2k} <~ dot-nu_k not witnessed";
      } else {
        r = judge_indexed(lr, K, opts);
      }
    }
  }
  return rep;
}

WeightSequence recover_predecessor(const std::vector<double>& log_sigma) {
  const int K = static_cast<int>(log_sigma.size()) - 1;
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "need at least sigma_0..sigma_2");
  if (std::abs(log_sigma[1]) > 1e-9) throw Error(ErrorCode::InvalidArgument, "descendant has sigma_1 = 1");
  // sigma*_k must be nondecreasing and not constant
  double prev = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double ls = log_sigma[static_cast<std::size_t>(k)] - std::log(double(k));
    if (ls < prev - 1e-12 * std::max(1.0, std::abs(prev)))
      throw Error(ErrorCode::InvalidArgument, "sigma*_k decreases at k=" + std::to_string(k));
    prev = ls;
  }
  if (!(prev > 1e-12)) throw Error(ErrorCode::InvalidArgument, "sigma*_k does not increase");

  // tau_k = c k / sigma_k. The difference identity
  //   tau_k - tau_{k+1} = (k+1)(1/nu_k - 1/nu_{k+1})
  // is run backwards from 1/nu_K = tau_K / (2(K+1)); what remains of tau_K is the
  // tail beyond K. Fixing nu_1 = 1 and tau_1 = 2 together would force every later
  // 1/nu_k to vanish, so c is chosen instead to make sum_k 1/nu_k = 1.
  // log domain: tau_K underflows for fast-growing sigma
  std::vector<double> lt(static_cast<std::size_t>(K) + 1, 0.0);
  for (int k = 1; k <= K; ++k) lt[static_cast<std::size_t>(k)] = std::log(double(k)) - log_sigma[static_cast<std::size_t>(k)];
  auto logaddexp = [](double x, double y) {
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
  };
  std::vector<double> linv(static_cast<std::size_t>(K) + 1, 0.0);
  linv[static_cast<std::size_t>(K)] = lt[static_cast<std::size_t>(K)] - std::log(2.0 * (K + 1));
  for (int k = K - 1; k >= 1; --k) {
    const double gap = lt[static_cast<std::size_t>(k) + 1] - lt[static_cast<std::size_t>(k)];
    if (gap > 1e-12) throw Error(ErrorCode::NonIncreasingResult, "tau increases at k=" + std::to_string(k));
    double cur = linv[static_cast<std::size_t>(k) + 1];
    if (gap < 0.0) cur = logaddexp(cur, lt[static_cast<std::size_t>(k)] + std::log(-std::expm1(gap)) - std::log(k + 1.0));
    linv[static_cast<std::size_t>(k)] = cur;
  }
  // total mass sum_{k>=1} 1/nu_k = tau_1 - 1/nu_1 before normalization
  const double total = std::exp(lt[1]) - std::exp(linv[1]);
  if (!(total > 0.0)) throw Error(ErrorCode::NonIncreasingResult, "no positive tail mass");
  std::vector<double> lnu(static_cast<std::size_t>(K) + 1, 0.0);
  for (int k = 1; k <= K; ++k) lnu[static_cast<std::size_t>(k)] = std::log(total) - linv[static_cast<std::size_t>(k)];
  return WeightSequence::from_log_quotients(std::move(lnu), {"predecessor", {}});
}

WeightSequence recover_predecessor(const WeightSequence& sigma) {
  return recover_predecessor(sigma.log_quotients());
}

double recovered_tail(const WeightSequence& nu) {
  double partial = 0.0;
  for (int k = nu.K(); k >= 1; --k) partial += std::exp(-nu.log_mu(k));
  return std::max(0.0, 1.0 - partial);
}

std::string descendant_csv(const WeightSequence& N, const Descendant& D) {
  std::ostringstream os;
  os.precision(17);
  os << "k,nu,tau,sigma,sigma_star,s\n";
  for (int k = 1; k <= D.K_eff; ++k) {
    os << k << ',' << N.mu(k) << ',' << D.tau[static_cast<std::size_t>(k)] << ',' << D.sigma.mu(k) << ','
       << D.sigma_star[static_cast<std::size_t>(k)] << ',' << D.small_s.M(k) << '\n';
  }
  return os.str();
}

}  // namespace ultrajet
