#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ultrajet/check_report.hpp"
#include "ultrajet/polynomial.hpp"
#include "ultrajet/seqcalc.hpp"

namespace ultrajet {

struct CompactSet1D {
  std::vector<double> points;                        ///< isolated points, sorted
  std::vector<std::pair<double, double>> intervals;  ///< disjoint closed intervals, sorted

  // sorts, dedups, drops points inside intervals; throws on overlapping intervals
  static CompactSet1D make(std::vector<double> points,
                           std::vector<std::pair<double, double>> intervals = {});

  [[nodiscard]] double hull_lo() const;
  [[nodiscard]] double hull_hi() const;
  [[nodiscard]] bool has_intervals() const noexcept { return !intervals.empty(); }
  // all components as closed intervals (points are degenerate), sorted
  [[nodiscard]] std::vector<std::pair<double, double>> components() const;
  [[nodiscard]] bool contains(double x) const;
};

struct Nearest {
  double xhat;
  double d;
};

// Ties between two components resolve to the smaller coordinate.
[[nodiscard]] Nearest nearest_point(const CompactSet1D& E, double x);

// Points carrying jet data: isolated points plus a grid on each interval.
[[nodiscard]] std::vector<double> carried_points(const CompactSet1D& E, double grid_fraction = 1.0 / 64);

class Jet {
 public:
  Jet(CompactSet1D E, int p_max, std::vector<double> carried, std::vector<std::vector<double>> values);

  [[nodiscard]] const CompactSet1D& set() const noexcept { return E_; }
  [[nodiscard]] int p_max() const noexcept { return p_max_; }
  [[nodiscard]] std::size_t size() const noexcept { return pts_.size(); }
  [[nodiscard]] double point(std::size_t i) const { return pts_.at(i); }
  [[nodiscard]] const std::vector<double>& points() const noexcept { return pts_; }
  [[nodiscard]] double value(std::size_t i, int k) const;
  [[nodiscard]] const std::vector<double>& values(std::size_t i) const { return vals_.at(i); }
  // carried point nearest to x (the jet is known only there)
  [[nodiscard]] std::size_t carried_index_near(double x) const;

  [[nodiscard]] Jet scaled(double c) const;
  [[nodiscard]] Jet plus(const Jet& other) const;  ///< same carried points required

 private:
  CompactSet1D E_;
  int p_max_;
  std::vector<double> pts_;
  std::vector<std::vector<double>> vals_;
};

// T_a^p F as a polynomial centered at a
[[nodiscard]] Poly taylor_poly(const Jet& F, std::size_t a, int p);

// (R_a^p F)^k(b) = F^k(b) - sum_{j<=p-k} (b-a)^j/j! F^{k+j}(a)
[[nodiscard]] double remainder(const Jet& F, std::size_t a, std::size_t b, int p, int k);

struct JetNormProfile {
  std::vector<double> rho_grid;
  std::vector<double> C_of_rho;
  std::optional<double> verdict_rho;  ///< smallest rho with C within 2x of the limit
  std::vector<double> order_rho;      ///< rho needed at each order (trend data)
  CheckReport trend;                  ///< FAILS means the jet is not in the class
  bool not_in_class = false;
  bool sampled_intervals = false;     ///< norm under-approximated on interval components
};

// |F^k(a)| <= C rho^k M_k and |(R_a^p F)^k(b)| <= C rho^{p+1} M_{p+1} |b-a|^{p+1-k} / (p+1-k)!
[[nodiscard]] JetNormProfile jet_norm_profile(const Jet& F, const WeightSequence& M,
                                              const std::vector<double>& rho_grid);

[[nodiscard]] std::vector<double> default_rho_grid();  ///< 2^j, -4 <= j <= 10

// C for |F^k(a)| <= C rho^k S_k and |(R_a^p F)^k(b)| <= C rho^{p+1} k! s_{p+1} |b-a|^{p+1-k}
[[nodiscard]] double factorial_form_constant(const Jet& F, const WeightSequence& small_s, double rho);

struct FittedJetConstants {
  double C = 0.0;
  double rho = 1.0;
  JetNormProfile profile;
};

// profile against S = k! s_k, then rho doubled for the factorial form. Throws JetNotInClass.
[[nodiscard]] FittedJetConstants fit_jet_constants(const Jet& F, const WeightSequence& small_s);

namespace analytic {
struct Exp {};
struct Sin {};
struct Polynomial { std::vector<double> coeffs; };  ///< sum c_j x^j
struct Rational { std::vector<double> p; std::vector<double> q; };
}  // namespace analytic
using AnalyticSpec = std::variant<analytic::Exp, analytic::Sin, analytic::Polynomial, analytic::Rational>;

// exact derivative recurrences; throws PoleOnSet for rational inputs with Q vanishing on the hull
[[nodiscard]] Jet sample_jet(const AnalyticSpec& f, const CompactSet1D& E, int p_max = 16);

// f^(k)(x) for the analytic descriptor, k = 0..n
[[nodiscard]] std::vector<double> analytic_derivs(const AnalyticSpec& f, double x, int n);

// ---- two variables: Taylor algebra only, for cross-checking formulas

struct Jet2D {
  std::vector<std::array<double, 2>> points;
  int p_max = 0;
  // values[i][(a1, a2)] = F^{(a1,a2)} at points[i]
  std::vector<std::map<std::pair<int, int>, double>> values;
};

// d^alpha (T_a^p F)(x)
[[nodiscard]] double taylor_deriv_2d(const Jet2D& F, std::size_t a, int p, std::pair<int, int> alpha,
                                     std::array<double, 2> x);
// (R_a^p F)^alpha(b)
[[nodiscard]] double remainder_2d(const Jet2D& F, std::size_t a, std::size_t b, int p, std::pair<int, int> alpha);

}  // namespace ultrajet
