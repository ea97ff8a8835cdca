#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultrajet/check_report.hpp"
#include "ultrajet/seqcalc.hpp"
#include "ultrajet/weightfunc.hpp"

namespace ultrajet {

// nu_{k+1}/nu_k <= (C+1) + C nu*_{k+1} sum_{j>=k+1} 1/nu_j. The witness is the
// smallest power of two that works on the prefix.
[[nodiscard]] CheckReport check_quotient_growth(const WeightSequence& N, const JudgeOptions& opts = {});

// sum_{l>=k} 1/nu_l <~ k/mu_k
[[nodiscard]] CheckReport check_tail_sum(const WeightSequence& M, const WeightSequence& N,
                                   const JudgeOptions& opts = {});

// sup_{0<=j<k} (M_k / (p^k N_j))^{1/(k-j)}
[[nodiscard]] double log_phi_pk(const WeightSequence& M, const WeightSequence& N, double p, int k);
[[nodiscard]] double phi_pk(const WeightSequence& M, const WeightSequence& N, double p, int k);

struct ExtensionVerdict {
  std::string condition_id;
  CheckReport verdict;
  std::vector<std::pair<std::size_t, std::size_t>> witnessing_pairs;  ///< (row, witness row)
  std::vector<double> constants;
  std::vector<double> p_used;  ///< for the phi-based condition
};

// for each row, some row N' with nu_k <~ N'_k^{1/k}
[[nodiscard]] ExtensionVerdict check_root_cover(const WeightMatrix& N, const JudgeOptions& opts = {});
// for each row, some row N' with sum_{l>=k} 1/nu'_l <~ k/nu_k
[[nodiscard]] ExtensionVerdict check_quotient_tail(const WeightMatrix& N, const JudgeOptions& opts = {});
// for each row, some row N' and p with sum_{l>=k} 1/nu'_l <~ k/phi_{p,k}^{N,N'}
[[nodiscard]] ExtensionVerdict check_phi_tail(const WeightMatrix& N,
                                         const std::vector<double>& p_grid = {1, 2, 4, 8, 16},
                                         const JudgeOptions& opts = {});

struct TailFormsReport {
  ExtensionVerdict hypothesis;
  ExtensionVerdict phi_form;
  ExtensionVerdict quotient_form;
  [[nodiscard]] bool applicable() const { return hypothesis.verdict.holds(); }
  [[nodiscard]] bool agree() const {
    return phi_form.verdict.holds() == quotient_form.verdict.holds();
  }
};

[[nodiscard]] TailFormsReport check_tail_forms(const WeightMatrix& N, const JudgeOptions& opts = {});

// Warn: the prefix did not witness the criterion; necessity is asymptotic.
enum class Answer { Yes, Warn };
[[nodiscard]] std::string_view to_string(Answer a) noexcept;

struct DecisionReport {
  Answer answer = Answer::Warn;
  AdmissibilityReport admissibility;
  ExtensionVerdict characterization;  ///< quotient tail form read as the surjectivity criterion
  std::optional<ExtensionVerdict> all_x_exists_y;  ///< weight-function form over params
  std::optional<OmegaIntegralReport> integral;      ///< weight-function integral form
  std::string note;
};

// Throws NotAdmissibleInSample when the matrix fails admissibility on the sample.
[[nodiscard]] DecisionReport decide_extension_property(
    const WeightMatrix& N, const std::optional<WeightFunction>& omega = std::nullopt,
    const JudgeOptions& opts = {});

// single pair M into N: sum_{l>=k} 1/nu_l <~ k/mu_k together with mu <~ nu
struct PairDecision {
  CheckReport tail_condition;
  CheckReport quotient_condition;
  [[nodiscard]] bool holds() const { return tail_condition.holds() && quotient_condition.holds(); }
};
[[nodiscard]] PairDecision decide_pair(const WeightSequence& M, const WeightSequence& N,
                                       const JudgeOptions& opts = {});

}  // namespace ultrajet
