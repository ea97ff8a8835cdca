#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ultrajet {

enum class Verdict { HoldsUpToK, Fails, Inconclusive, NotWitnessedInSample };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

/// Result of a finite-prefix check of an asymptotic condition.
///
/// FAILS always carries a counterexample index; HOLDS_UP_TO_K carries the
/// smallest constant that validates the inequality on the prefix whenever
/// the condition is of "<= C * ..." type.
struct CheckReport {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> witness_constant;
  std::optional<int> counterexample_index;
  int prefix_K = 0;
  std::string note;

  [[nodiscard]] bool holds() const noexcept { return verdict == Verdict::HoldsUpToK; }
  [[nodiscard]] bool fails() const noexcept { return verdict == Verdict::Fails; }
};

/// Thresholds used to turn a sampled ratio sequence into a verdict.
struct JudgeOptions {
  /// Any ratio above this cap is a counterexample.
  double cap = 1e8;
  /// Second-half maximum over first-half maximum that counts as growth.
  double growth_factor = 1.5;
};

/// Decide whether a sequence of ratios stays bounded on the prefix.
///
/// `log_ratios[i]` is the log of the ratio lhs/rhs at `indices[i]`. The
/// sequence FAILS if some ratio exceeds the cap, or if it grows by more than
/// `growth_factor` between the two halves while increasing across the last
/// three quarters. Otherwise it HOLDS with witness = max ratio.
[[nodiscard]] CheckReport judge_bounded(std::span<const double> log_ratios,
                                        std::span<const int> indices, int prefix_K,
                                        const JudgeOptions& opts = {});

/// Convenience overload with indices 1, 2, 3, ...
[[nodiscard]] CheckReport judge_bounded(std::span<const double> log_ratios, int prefix_K,
                                        const JudgeOptions& opts = {});

}  // namespace ultrajet
