#pragma once

#include <cmath>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ultrajet/check_report.hpp"

namespace ultrajet {

/// Analytic origin of a sequence, kept for reporting.
struct FamilyTag {
  std::string family;
  std::map<std::string, double> params;
};

namespace family {
struct Gevrey { double s; };                   ///< M_k = k!^s
struct QGevrey { double q; };                  ///< M_k = q^(k^2)
struct PowerLog { double A; double p; };       ///< M_k = A^(k^p)
struct Table { std::vector<double> values; };  ///< M_0, M_1, ... given directly
}  // namespace family

using FamilySpec = std::variant<family::Gevrey, family::QGevrey, family::PowerLog, family::Table>;

/// Positive log-convex sequence M_0 = 1, M_1, ..., M_K stored in log domain.
///
/// Views: quotients mu_k = M_k / M_{k-1} (mu_0 = 1) and the factorial-stripped
/// m_k = M_k / k!. All entries are finite logs; nothing is exponentiated
/// unless a caller asks for it.
class WeightSequence {
 public:
  /// Build from log M_k, k = 0..K. Validates normalization and log-convexity.
  static WeightSequence from_log_values(std::vector<double> log_M, FamilyTag tag = {});
  /// Build from log mu_k, k = 0..K (log_mu[0] is ignored and set to 0).
  static WeightSequence from_log_quotients(std::vector<double> log_mu, FamilyTag tag = {});

  [[nodiscard]] int K() const noexcept { return static_cast<int>(log_M_.size()) - 1; }
  [[nodiscard]] double log_M(int k) const { return log_M_.at(static_cast<std::size_t>(k)); }
  [[nodiscard]] double log_mu(int k) const { return log_mu_.at(static_cast<std::size_t>(k)); }
  [[nodiscard]] double log_m(int k) const;
  [[nodiscard]] double M(int k) const;
  [[nodiscard]] double mu(int k) const;

  [[nodiscard]] const std::vector<double>& log_values() const noexcept { return log_M_; }
  [[nodiscard]] const std::vector<double>& log_quotients() const noexcept { return log_mu_; }
  [[nodiscard]] const FamilyTag& tag() const noexcept { return tag_; }

  /// Same sequence restricted to indices 0..K.
  [[nodiscard]] WeightSequence truncated(int K) const;
  /// N_k -> c^k N_k.
  [[nodiscard]] WeightSequence rescaled(double c) const;

  /// M_k^{1/k} grows by a factor >= 4 across the prefix (trend, not proof).
  [[nodiscard]] bool root_diverges_on_prefix() const;

 private:
  WeightSequence() = default;
  void validate() const;

  std::vector<double> log_M_;
  std::vector<double> log_mu_;
  FamilyTag tag_;
};

[[nodiscard]] WeightSequence make_sequence(const FamilySpec& spec, int K);

struct HResult {
  double value;      ///< h_M(t) in (0, 1]
  double log_value;  ///< log h_M(t), finite even when value underflows
  int attained_k;    ///< smallest minimizing index
  bool trusted;      ///< attained_k < K
};

/// h_M(t) = inf_k M_k t^k over the prefix.
[[nodiscard]] HResult h_assoc(const WeightSequence& M, double t);
/// Same with the argument given as log t.
[[nodiscard]] HResult h_assoc_log(const WeightSequence& M, double log_t);

/// Gamma_M(t) = min{k : mu_{k+1} >= 1/t}. Throws PREFIX_EXHAUSTED past mu_K.
[[nodiscard]] int gamma_count(const WeightSequence& M, double t);
[[nodiscard]] int gamma_count_log(const WeightSequence& M, double log_t);

/// Sigma_M(t) = max{k : mu_k <= t}. Requires t < mu_K.
[[nodiscard]] int sigma_count(const WeightSequence& M, double t);
[[nodiscard]] int sigma_count_log(const WeightSequence& M, double log_t);

/// omega_M(t) = sum_{mu_k <= t} log(t / mu_k). Requires t < mu_K.
[[nodiscard]] double omega_assoc(const WeightSequence& M, double t);
[[nodiscard]] double omega_assoc_log(const WeightSequence& M, double log_t);

/// Suffix sums of 1/mu_j with a fitted power-law bound for the truncated tail.
struct TailSums {
  /// suffix[k] = sum_{j=k}^{K} 1/mu_j + tail_bound, for k = 1..K (suffix[0] unused).
  std::vector<double> suffix;
  double tail_bound = 0.0;   ///< estimate of sum_{j>K} 1/mu_j
  double decay_exponent = 0.0;  ///< b in 1/mu_j ~ a j^{-b} on the last quarter
  double partial_sum = 0.0;  ///< sum_{j=1}^{K} 1/mu_j
  [[nodiscard]] bool reliable() const noexcept {
    return std::isfinite(tail_bound) && tail_bound <= 0.01 * partial_sum;
  }
};

[[nodiscard]] TailSums reciprocal_tail_sums(const WeightSequence& N);

struct ModerateGrowthReport {
  std::map<std::string, CheckReport> conditions;  ///< keys "moderate-0" .. "moderate-5"
  bool coherent = true;
  CheckReport summary;
  std::string diagnostics;
};

/// The six equivalent forms of moderate growth, each evaluated on the prefix.
[[nodiscard]] ModerateGrowthReport check_moderate_growth(const WeightSequence& M,
                                                         const JudgeOptions& opts = {});

/// mu_{k+1} <~ mu_k (almost concavity of log M).
[[nodiscard]] CheckReport check_almost_concave(const WeightSequence& M,
                                               const JudgeOptions& opts = {});

struct MixedGrowthReport {
  CheckReport quotient_doubling;   ///< mu_{2k} <~ dot-mu_k, witness C
  CheckReport h_square;            ///< h_M(t) <= h_Mdot(Ct)^2, witness C
  CheckReport gamma_doubling;      ///< 2 Gamma_Mdot(t) <= Gamma_M(lambda t), witness lambda
  CheckReport product_bound;       ///< M_{k+j} <= C^{k+j} Mdot_j Mdot_k, witness C
  bool chain_consistent = true;    ///< quotient doubling => h_square => product bound
};

[[nodiscard]] MixedGrowthReport check_mixed_growth(const WeightSequence& M,
                                                   const WeightSequence& Mdot,
                                                   const JudgeOptions& opts = {});

/// Trend verdict for sum_k 1/mu_k < infinity from a log-log slope fit on the
/// last half of the prefix: slope <= -1.1 holds, slope >= -1.0 fails.
[[nodiscard]] CheckReport check_nonquasianalytic(const WeightSequence& N);

struct EquivalenceReport {
  CheckReport m_below_n;   ///< M_k^{1/k} <~ N_k^{1/k}
  CheckReport n_below_m;   ///< N_k^{1/k} <~ M_k^{1/k}
  CheckReport quotients;   ///< mu ~ nu (both directions), witness = larger constant
  [[nodiscard]] bool equivalent() const { return m_below_n.holds() && n_below_m.holds(); }
};

[[nodiscard]] EquivalenceReport check_equivalence(const WeightSequence& M,
                                                  const WeightSequence& N,
                                                  const JudgeOptions& opts = {});

/// mu <~ nu on the shared prefix (k >= 1).
[[nodiscard]] CheckReport check_quotient_below(const WeightSequence& M, const WeightSequence& N,
                                               const JudgeOptions& opts = {});

}  // namespace ultrajet
