#pragma once

#include <vector>

#include "ultrajet/polynomial.hpp"

namespace ultrajet {

// Compactly supported piecewise polynomial: pieces[i] lives on
// [breakpoints[i], breakpoints[i+1]) with origin at its left end; zero elsewhere.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Poly> pieces, int smoothness);

  static PiecewisePolynomial indicator(double lo, double hi);

  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return bp_; }
  [[nodiscard]] const std::vector<Poly>& pieces() const noexcept { return pieces_; }
  [[nodiscard]] int smoothness() const noexcept { return smooth_; }
  [[nodiscard]] int max_degree() const;
  [[nodiscard]] double support_lo() const { return bp_.empty() ? 0.0 : bp_.front(); }
  [[nodiscard]] double support_hi() const { return bp_.empty() ? 0.0 : bp_.back(); }

  [[nodiscard]] double eval(double x) const;
  [[nodiscard]] double deriv(int k, double x) const;
  [[nodiscard]] std::vector<double> derivs(double x, int n) const;  ///< f, f', ..., f^(n)

  [[nodiscard]] double integral() const;
  // largest jump of the k-th derivative across interior breakpoints, relative to scale
  [[nodiscard]] double max_jump(int k) const;

  // (1/w) * int_{x-w/2}^{x+w/2} f(y) dy, exact on pieces
  [[nodiscard]] PiecewisePolynomial box_convolve(double w) const;

 private:
  [[nodiscard]] long piece_index(double x) const;  ///< -1 left of support, n right of it

  std::vector<double> bp_;
  std::vector<Poly> pieces_;
  int smooth_ = -1;
};

// Indicator of [lo, hi] smoothed by successive box convolutions of the given widths.
[[nodiscard]] PiecewisePolynomial smooth_indicator(double lo, double hi, const std::vector<double>& widths);

}  // namespace ultrajet
