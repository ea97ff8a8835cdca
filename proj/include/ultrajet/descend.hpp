#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ultrajet/check_report.hpp"
#include "ultrajet/seqcalc.hpp"

namespace ultrajet {

struct DescendOptions {
  int K_eff = 0;                       ///< 0 means K/2
  std::optional<double> tail_beyond_K;  ///< exact sum_{j>K} 1/nu_j when known
};

// tau_k = k/nu_k + sum_{j>=k} 1/nu_j, sigma_k = tau_1 k / tau_k, and s_k = S_k/k!.
struct Descendant {
  int K_eff = 0;
  std::vector<double> tau;        ///< index 1..K_eff, tau[0] unused
  std::vector<double> tau_error;  ///< error bar from the truncated tail
  std::vector<double> tails;      ///< sum_{j>=k} 1/nu_j for 1 <= k <= K_eff + 1
  std::vector<double> log_tails;
  std::vector<double> log_tau;
  std::vector<double> sigma_star; ///< sigma_k / k
  WeightSequence sigma;           ///< quotients sigma_k
  WeightSequence small_s;         ///< quotients sigma*_k, values S_k/k!
  int tail_truncation = 0;        ///< K of the input: tails summed to here
  double tail_bound = 0.0;

  [[nodiscard]] double sigma_at(int k) const { return sigma.mu(k); }
};

[[nodiscard]] Descendant descend(const WeightSequence& N, const DescendOptions& opts = {});

struct DescendantReport {
  std::array<CheckReport, 6> items;  ///< items[i] is item (i+1)
};

[[nodiscard]] DescendantReport check_descendant(const WeightSequence& N, const Descendant& D,
                                          const std::optional<WeightSequence>& Ndot = std::nullopt,
                                          const JudgeOptions& opts = {});

// tau_k = c k/sigma_k, 1/nu_k from tau_k - tau_{k+1} = (k+1)(1/nu_k - 1/nu_{k+1}) run
// backwards from the last index; c is set so that sum_k 1/nu_k = 1 including the tail.
// log_sigma holds log sigma_k for k = 0..K.
[[nodiscard]] WeightSequence recover_predecessor(const std::vector<double>& log_sigma);
[[nodiscard]] WeightSequence recover_predecessor(const WeightSequence& sigma);

// sum_{j > K} 1/nu_j for a recovered predecessor, whose full sum is 1
[[nodiscard]] double recovered_tail(const WeightSequence& nu);

// (k, nu_k, tau_k, sigma_k, sigma*_k, s_k) rows
[[nodiscard]] std::string descendant_csv(const WeightSequence& N, const Descendant& D);

}  // namespace ultrajet
