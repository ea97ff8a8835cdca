#include "ultrajet/check_report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ultrajet/error.hpp"

namespace ultrajet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonLogConvex: return "NON_LOGCONVEX";
    case ErrorCode::NotNormalized: return "NOT_NORMALIZED";
    case ErrorCode::NonPositive: return "NON_POSITIVE";
    case ErrorCode::PrefixExhausted: return "PREFIX_EXHAUSTED";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Unbounded: return "UNBOUNDED";
    case ErrorCode::QuasianalyticInput: return "QUASIANALYTIC_INPUT";
    case ErrorCode::TailUnreliable: return "TAIL_UNRELIABLE";
    case ErrorCode::NonIncreasingResult: return "NONINCREASING_RESULT";
    case ErrorCode::OrderExceeded: return "ORDER_EXCEEDED";
    case ErrorCode::PoleOnSet: return "POLE_ON_SET";
    case ErrorCode::ATooSmall: return "A_TOO_SMALL";
    case ErrorCode::DepthInsufficient: return "DEPTH_INSUFFICIENT";
    case ErrorCode::WidthBudget: return "WIDTH_BUDGET";
    case ErrorCode::DegenerateGap: return "DEGENERATE_GAP";
    case ErrorCode::JetNotInClass: return "JET_NOT_IN_CLASS";
    case ErrorCode::RowChainUnavailable: return "ROW_CHAIN_UNAVAILABLE";
    case ErrorCode::NotAdmissibleInSample: return "NOT_ADMISSIBLE_IN_SAMPLE";
    case ErrorCode::Io: return "IO_ERROR";
    case ErrorCode::Parse: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::HoldsUpToK: return "HOLDS_UP_TO_K";
    case Verdict::Fails: return "FAILS";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::NotWitnessedInSample: return "NOT_WITNESSED_IN_SAMPLE";
  }
  return "INCONCLUSIVE";
}

namespace {

double range_max(std::span<const double> v, std::size_t lo, std::size_t hi) {
  double m = -INFINITY;
  for (std::size_t i = lo; i < hi && i < v.size(); ++i) m = std::max(m, v[i]);
  return m;
}

}  // namespace

CheckReport judge_bounded(std::span<const double> log_ratios, std::span<const int> indices,
                          int prefix_K, const JudgeOptions& opts) {
  CheckReport rep;
  rep.prefix_K = prefix_K;
  const std::size_t n = log_ratios.size();
  if (n == 0) {
    rep.note = "no sampled constraints";
    return rep;
  }
  const double log_cap = std::log(opts.cap);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(log_ratios[i]) || log_ratios[i] > log_cap) {
      rep.verdict = Verdict::Fails;
      rep.counterexample_index = indices[i];
      rep.witness_constant = std::isnan(log_ratios[i]) ? INFINITY : std::exp(log_ratios[i]);
      rep.note = "ratio exceeds cap";
      return rep;
    }
  }
  const double overall = range_max(log_ratios, 0, n);
  if (n >= 8) {
    const double first_half = range_max(log_ratios, 0, n / 2);
    const double q2 = range_max(log_ratios, n / 4, n / 2);
    const double q3 = range_max(log_ratios, n / 2, 3 * n / 4);
    const double q4 = range_max(log_ratios, 3 * n / 4, n);
    const double second_half = std::max(q3, q4);
    if (second_half - first_half > std::log(opts.growth_factor) && q4 > q3 && q3 > q2) {
      rep.verdict = Verdict::Fails;
      for (std::size_t i = n / 2; i < n; ++i) {
        if (log_ratios[i] - first_half > std::log(opts.growth_factor)) {
          rep.counterexample_index = indices[i];
          break;
        }
      }
      if (!rep.counterexample_index) rep.counterexample_index = indices[n - 1];
      rep.witness_constant = std::exp(overall);
      rep.note = "ratio grows across the prefix";
      return rep;
    }
  }
  rep.verdict = Verdict::HoldsUpToK;
  rep.witness_constant = std::exp(overall);
  return rep;
}

CheckReport judge_bounded(std::span<const double> log_ratios, int prefix_K,
                          const JudgeOptions& opts) {
  std::vector<int> idx(log_ratios.size());
  std::iota(idx.begin(), idx.end(), 1);  // ratios usually start at k = 1
  return judge_bounded(log_ratios, idx, prefix_K, opts);
}

}  // namespace ultrajet
