#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultrajet/check_report.hpp"
#include "ultrajet/seqcalc.hpp"

namespace ultrajet {

// Weight function omega on [0, inf). Either the closed-form family
// omega_s(t) = max(0, (log t)^s) or a table interpolated linearly in log t.
class WeightFunction {
 public:
  static WeightFunction omega_s(double s);
  // points are (t, omega(t)) with t > 1 strictly increasing and omega nondecreasing.
  // Beyond the last point the last segment is continued as a power law.
  static WeightFunction table(std::vector<std::pair<double, double>> points);

  [[nodiscard]] double operator()(double t) const;
  // phi(y) = omega(e^y); zero for y <= 0
  [[nodiscard]] double phi(double y) const;

  [[nodiscard]] bool is_omega_s() const noexcept { return kind_ == Kind::OmegaS; }
  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] double r() const noexcept { return s_ / (s_ - 1.0); }
  [[nodiscard]] double C_s() const noexcept { return (s_ - 1.0) * std::pow(s_, -r()); }
  [[nodiscard]] std::string describe() const;

  // convexity of phi via second differences on a y-grid
  [[nodiscard]] bool phi_convex_on_grid() const;

 private:
  enum class Kind { OmegaS, Table };
  Kind kind_ = Kind::OmegaS;
  double s_ = 2.0;
  std::vector<double> log_t_;
  std::vector<double> w_;
};

// phi*(x) = sup_{y >= 0} x y - phi(y), by golden-section search.
[[nodiscard]] double young_conjugate(const WeightFunction& w, double x);

struct WeightMatrix {
  std::vector<double> params;
  std::vector<WeightSequence> rows;
  std::string origin = "manual";
  double closed_form_deviation = 0.0;  ///< max relative gap closed form vs numeric conjugate

  [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
  [[nodiscard]] int K() const;
  [[nodiscard]] const WeightSequence& row(std::size_t i) const { return rows.at(i); }
  [[nodiscard]] std::optional<std::size_t> index_of(double param) const;

  // checks params increasing and rows ordered pointwise and quotient-wise
  static WeightMatrix assemble(std::vector<double> params, std::vector<WeightSequence> rows,
                               std::string origin = "manual");
};

[[nodiscard]] std::vector<double> default_param_grid();  ///< {2^j : -3 <= j <= 6}

[[nodiscard]] WeightMatrix associated_matrix(const WeightFunction& w,
                                             const std::vector<double>& params, int K);

// log W_k^{s,rho} = C_s rho^{r-1} k^r
[[nodiscard]] WeightSequence omega_s_row(double s, double rho, int K);

struct AdmissibilityReport {
  std::array<CheckReport, 5> conditions;            ///< index i is condition (i+1)
  std::vector<CheckReport> nonquasianalytic;        ///< per row
  std::vector<CheckReport> quotient_growth;                ///< per row
  std::vector<std::optional<std::size_t>> cover_row;     ///< row witnessing (4)
  std::vector<std::optional<double>> cover_constant;
  std::vector<std::optional<std::size_t>> doubling_row;  ///< row witnessing (5)
  std::vector<std::optional<double>> doubling_constant;
  std::vector<bool> saturated;  ///< top rows whose witness lies beyond the sampled params

  [[nodiscard]] bool admissible_in_sample() const;
};

// Folds per-row existential witnesses. A contiguous block of unwitnessed top rows
// is accepted as saturated when at least one lower row is witnessed.
[[nodiscard]] CheckReport combine_row_witnesses(
    const std::vector<std::optional<std::pair<std::size_t, double>>>& witnesses,
    std::vector<bool>& saturated, int K);

[[nodiscard]] AdmissibilityReport check_admissible_matrix(const WeightMatrix& N,
                                                          const JudgeOptions& opts = {});

// smallest row index j with nu^(i)_k <~ (N^(j)_k)^{1/k}, and the constant
[[nodiscard]] std::optional<std::pair<std::size_t, double>> find_cover_row(
    const WeightMatrix& N, std::size_t i, const JudgeOptions& opts = {});
// smallest row index j with nu^(i)_{2k} <~ nu^(j)_k
[[nodiscard]] std::optional<std::pair<std::size_t, double>> find_doubling_row(
    const WeightMatrix& N, std::size_t i, const JudgeOptions& opts = {});

struct OmegaIntegralReport {
  CheckReport integral;        ///< convergence of int_1^inf t^-2 omega(t) dt; witness = value
  CheckReport shifted_bound;   ///< int_1^inf y^-2 omega(ty) dy <= A omega(t) + B on t in [1, 1e6]
  double value = 0.0;
  std::optional<double> A;
  std::optional<double> B;
};

[[nodiscard]] OmegaIntegralReport check_omega_nonquasianalytic(const WeightFunction& w);

// ---- closed-form family checks

// sum_{l >= k} 1/theta_l <= C k / theta_k, tail beyond K bounded by the fitted tail
[[nodiscard]] CheckReport check_tail_vs_quotient(const WeightSequence& W);
// theta^{rho}_{k+1} <= (W^{c rho}_k)^{1/k} exactly for 1 <= k <= K
[[nodiscard]] CheckReport check_next_quotient_root(double s, double rho, double c, int K);
// r k^{r-1} <= (k+1)^r - k^r <= r (k+1)^{r-1}
[[nodiscard]] bool check_power_difference_bounds(double r, int K);
// theta^x_{2k} <= theta^{4x}_k for 2 <= k <= K/2
[[nodiscard]] bool check_quotient_doubling_pair(const WeightSequence& Wx, const WeightSequence& W4x);
// exists H <= 64 (among rows) with rho^k W^x_k <= C W^{Hx}_k; returns H
[[nodiscard]] std::optional<double> find_scaling_row(const WeightMatrix& W, std::size_t i,
                                                     double rho, const JudgeOptions& opts = {});

}  // namespace ultrajet
