#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultrajet/check_report.hpp"
#include "ultrajet/descend.hpp"
#include "ultrajet/jets.hpp"
#include "ultrajet/seqcalc.hpp"
#include "ultrajet/spline.hpp"
#include "ultrajet/weightfunc.hpp"

namespace ultrajet {

// ---------------------------------------------------------------------------
// Cutoffs from iterated box convolution

// alpha_k = (2p)^k for k <= p, (A/sigma*_{p+1})^k Ndot_k beyond; log domain, k = 0..K_out
struct AlphaSequence {
  int p = 1;
  double A = 1.0;
  std::vector<double> log_alpha;
  double ratio_sum = 0.0;  ///< sum_k alpha_k/alpha_{k+1}, tail included
  bool valid = false;      ///< ratio_sum <= 1
};

[[nodiscard]] AlphaSequence alpha_sequence(const Descendant& S, const WeightSequence& Ndot, int p,
                                           double A, int K_out);

class CutoffFamily {
 public:
  // Searches the smallest power of two A for which the ratio sums stay <= 1 and
  // alpha_k <= (A/sigma*_{p+1})^k Ndot_k / h_s(1/(3 sigma*_p)) on the tested p.
  CutoffFamily(WeightSequence N, WeightSequence Ndot, int conv_depth = 12);

  [[nodiscard]] double A() const noexcept { return A_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }  ///< 1/h_s(1/3)
  [[nodiscard]] double B() const noexcept { return B_; }          ///< 1/(6 delta A)
  [[nodiscard]] int conv_depth() const noexcept { return conv_depth_; }
  [[nodiscard]] int p_tested() const noexcept { return p_tested_; }
  [[nodiscard]] const WeightSequence& N() const noexcept { return N_; }
  [[nodiscard]] const WeightSequence& Ndot() const noexcept { return Ndot_; }
  [[nodiscard]] const Descendant& descendant() const noexcept { return S_; }

  // index selected by 2A/sigma*_{p+1} <= eta <= 2A/sigma*_p, eta = eps (t-1)/delta
  [[nodiscard]] int select_p(double epsilon, double t) const;
  // box widths d_k = (t-1) alpha_{k-1}/alpha_k, k = 1..conv_depth
  [[nodiscard]] std::vector<double> widths(double epsilon, double t) const;
  // log of eps^k Ndot_k / h_s(B eps (t-1))
  [[nodiscard]] double log_bound(double epsilon, double t, int k) const;

  // phi_{eps,t}: 1 on [-1,1], 0 off (-t,t); cached by (p, t)
  [[nodiscard]] const PiecewisePolynomial& build(double epsilon, double t) const;

 private:
  WeightSequence N_;
  WeightSequence Ndot_;
  Descendant S_;
  int conv_depth_;
  int p_tested_ = 0;
  double A_ = 1.0;
  double delta_ = 1.0;
  double B_ = 1.0;
  mutable std::map<std::pair<int, double>, PiecewisePolynomial> cache_;
};

[[nodiscard]] inline const PiecewisePolynomial& build_cutoff(const CutoffFamily& fam, double epsilon,
                                                             double t) {
  return fam.build(epsilon, t);
}

struct CutoffCheck {
  bool range_ok = true;    ///< 0 <= phi <= 1 on the grid
  bool plateau_ok = true;  ///< phi == 1 on [-1,1]
  bool support_ok = true;  ///< support inside [-t,t]
  int max_order = 0;
  int probes = 0;
  int bound_violations = 0;
  double worst_log_margin = -INFINITY;  ///< max of log|phi^(k)| - log bound
  [[nodiscard]] bool ok() const { return range_ok && plateau_ok && support_ok && bound_violations == 0; }
};

[[nodiscard]] CutoffCheck verify_cutoff(const CutoffFamily& fam, double epsilon, double t, int max_order,
                                        int probes = 1000);

// ---------------------------------------------------------------------------
// Whitney cover of the complement in one variable

struct Ball {
  double x;
  double r;
  double xhat;  ///< nearest point of E to the center
  double d;     ///< d(x_i, E)
};

struct WhitneyCover1D {
  std::vector<Ball> balls;  ///< ordered by center
  double a = 0.0, b = 0.0, c = 1.5;
  int n0 = 0;
  double d_min = 1e-6;
  double domain_lo = 0.0, domain_hi = 0.0;
  bool degenerate_gap = false;
  bool coverage_ok = false;
  std::string note;
  CompactSet1D E;

  [[nodiscard]] const CompactSet1D& set() const noexcept { return E; }
  // indices of balls whose enlarged ball B(x_i, c r_i) contains x
  [[nodiscard]] std::vector<std::size_t> active(double x) const;
  [[nodiscard]] bool covered(double x) const;  ///< inside some B(x_i, r_i)
};

// Gap ladders shrink geometrically toward E with r_i = d(x_i)/4; d_min stops them.
[[nodiscard]] WhitneyCover1D whitney_cover(const CompactSet1D& E, double d_min = 1e-6, double margin = 2.0);

// ---------------------------------------------------------------------------
// Partition of unity

// Search for A with h_s(t) <= h_sdot(A t)^n0 on a sampled t-grid; log2 steps.
[[nodiscard]] CheckReport check_h_power(const WeightSequence& s, const WeightSequence& sdot, int n0);

class PartitionOfUnity {
 public:
  // fam carries the (Ndot', Nddot') pair; A_power is the h-power constant relating
  // the input descendant to fam's descendant.
  PartitionOfUnity(WhitneyCover1D cover, std::shared_ptr<const CutoffFamily> fam, double epsilon,
                   double A_power, WeightSequence s_in);

  [[nodiscard]] const WhitneyCover1D& cover() const noexcept { return cover_; }
  [[nodiscard]] std::size_t size() const noexcept { return cover_.balls.size(); }
  [[nodiscard]] double epsilon() const noexcept { return eps_; }
  [[nodiscard]] double B1() const noexcept { return B1_; }

  // support of phi_i is inside (x_i - c r_i, x_i + c r_i)
  [[nodiscard]] std::pair<double, double> support(std::size_t i) const;
  // psi_i and its first n derivatives
  [[nodiscard]] std::vector<double> psi(std::size_t i, double x, int n) const;
  // (index, derivatives 0..n) for every phi_i not identically zero near x
  [[nodiscard]] std::vector<std::pair<std::size_t, std::vector<double>>> phis(double x, int n) const;
  [[nodiscard]] double sum(double x) const;
  // log of eps^k Nddot_k / h_s(B1 eps d(x))
  [[nodiscard]] double log_bound(double x, int k) const;

 private:
  WhitneyCover1D cover_;
  std::shared_ptr<const CutoffFamily> fam_;
  double eps_;
  double A_power_;
  double B1_ = 0.0;
  WeightSequence s_in_;
  std::vector<const PiecewisePolynomial*> cut_;  ///< per ball, unit-scaled cutoff
};

// Rows for a partition whose input row is `input`: the first row j >= start with
// h_s(t) <= h_s_j(A t)^n0, then the next step above j.
struct PartitionRows {
  std::size_t Ndot_p = 0;
  std::size_t Nddot_p = 0;
  double A_power = 0.0;
};
[[nodiscard]] PartitionRows select_partition_rows(const WeightMatrix& Nm, std::size_t input, int n0,
                                                  std::optional<std::size_t> start = std::nullopt);

// Moves to higher rows while the cutoffs for the smallest balls exceed the sampled depth.
[[nodiscard]] std::pair<PartitionOfUnity, PartitionRows> partition_with_rows(const WhitneyCover1D& cover,
                                                                             const WeightMatrix& Nm, std::size_t input,
                                                                             double epsilon, int conv_depth = 12);
[[nodiscard]] inline PartitionOfUnity partition_of_unity(const WhitneyCover1D& cover, const WeightMatrix& Nm,
                                                         std::size_t input, double epsilon, int conv_depth = 12) {
  return partition_with_rows(cover, Nm, input, epsilon, conv_depth).first;
}

struct PartitionCheck {
  int probes = 0;
  double max_sum_error = 0.0;
  bool range_ok = true;
  bool supports_ok = true;
  int bound_violations = 0;
  int max_order = 0;
  [[nodiscard]] bool ok(double tol = 1e-9) const {
    return max_sum_error < tol && range_ok && supports_ok && bound_violations == 0;
  }
};

[[nodiscard]] PartitionCheck verify_partition(const PartitionOfUnity& P, int max_order, int probes = 1000);

// ---------------------------------------------------------------------------
// Extension

// Rows of the construction, by matrix index.
struct RowChain {
  std::size_t N = 0;        ///< S is its descendant
  std::size_t Ndot = 0;     ///< nu_k <~ Ndot_k^{1/k}, nu_{2k} <~ nudot_k
  std::size_t Nddot = 0;    ///< same relation one step up; h_sdot <= h_sddot(D t)^2
  std::size_t Ndot_p = 0;   ///< h_sdot(t) <= h_s'(A t)^n0
  std::size_t Nddot_p = 0;  ///< next step above Ndot_p, bounds the partition
  double D = 0.0;
  double A_power = 0.0;
};

struct ExtendConfig {
  std::size_t base_row = 0;
  std::optional<double> L;  ///< fixed L skips the search
  double d_min = 1e-6;
  double margin = 2.0;
  int conv_depth = 12;
  int p_max_eval = 8;
  int probes = 400;
  unsigned seed = 12345;
};

struct TaylorJumpCheck {
  int probes = 0;
  int violations_derivative = 0;
  int violations_remainder = 0;
  double worst_log_ratio = -INFINITY;  ///< max log(lhs/rhs)
  [[nodiscard]] bool ok() const { return violations_derivative == 0 && violations_remainder == 0; }
};

struct ExtensionVerification {
  std::vector<double> ladder;                   ///< probe distances
  std::vector<double> ladder_error;             ///< max_k |f^(k) - F^k(a)| per distance
  bool ladder_decreasing = false;
  double growth_C = 0.0;                        ///< C' for the output row
  double growth_rho = 0.0;                      ///< rho'
  CheckReport growth_trend;                     ///< required rho' per order stays bounded
  TaylorJumpCheck taylor_jumps;
  int orders_checked = 0;
};

class Extension {
 public:
  Extension(Jet F, std::shared_ptr<const WeightMatrix> Nm, RowChain chain, PartitionOfUnity P,
            std::shared_ptr<const CutoffFamily> global_fam, double L, double C, double rho);

  // f, f', ..., f^(n) at x
  [[nodiscard]] std::vector<double> derivs(double x, int n) const;
  [[nodiscard]] double eval(double x) const { return derivs(x, 0)[0]; }

  [[nodiscard]] int degree_at(double d) const;  ///< min(2 Gamma_sdot(L d), p_max)
  // Taylor polynomial of F at the nearest point with the degree used at distance d
  [[nodiscard]] std::vector<double> taylor_derivs(double x, int n) const;

  [[nodiscard]] const Jet& jet() const noexcept { return F_; }
  [[nodiscard]] const RowChain& chain() const noexcept { return chain_; }
  [[nodiscard]] const PartitionOfUnity& partition() const noexcept { return P_; }
  [[nodiscard]] const WeightMatrix& matrix() const noexcept { return *Nm_; }
  [[nodiscard]] double L() const noexcept { return L_; }
  [[nodiscard]] double epsilon() const noexcept { return P_.epsilon(); }
  [[nodiscard]] double C() const noexcept { return C_; }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] const Descendant& S() const noexcept { return S_; }
  [[nodiscard]] const Descendant& Sdot() const noexcept { return Sdot_; }
  [[nodiscard]] std::vector<int> ball_degrees() const;
  [[nodiscard]] double global_cutoff(double x) const;

 private:
  [[nodiscard]] std::vector<double> global_derivs(double x, int n) const;

  Jet F_;
  std::shared_ptr<const WeightMatrix> Nm_;
  RowChain chain_;
  PartitionOfUnity P_;
  std::shared_ptr<const CutoffFamily> gfam_;
  double L_, C_, rho_;
  Descendant S_;
  Descendant Sdot_;
  std::vector<PiecewisePolynomial> global_;  ///< sum of these is the global cutoff
};

struct ExtensionResult {
  std::shared_ptr<const Extension> f;
  ExtensionVerification verification;
  double D1 = 0.0;  ///< L / rho
  std::string note;
};

[[nodiscard]] RowChain select_row_chain(const WeightMatrix& Nm, std::size_t base, int n0);

[[nodiscard]] TaylorJumpCheck check_taylor_jumps(const Extension& f, const std::vector<double>& probes, int max_order);

[[nodiscard]] ExtensionVerification verify_extension(const Extension& f, int p_eval, int probes, unsigned seed);

[[nodiscard]] ExtensionResult extend_jet(const Jet& F, std::shared_ptr<const WeightMatrix> Nm,
                                         const ExtendConfig& cfg = {});

// Bound on the difference of two Taylor polynomials; returns (lhs, rhs)
[[nodiscard]] std::pair<double, double> check_taylor_difference_bound(const Jet& F, const WeightSequence& small_s,
                                                                      double C, double rho, std::size_t a1,
                                                                      std::size_t a2, int p, int k, double x);

}  // namespace ultrajet
