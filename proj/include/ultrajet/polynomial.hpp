#pragma once

#include <vector>

namespace ultrajet {

// p(x) = sum_j c_j (x - origin)^j, coefficients kept in long double.
class Poly {
 public:
  Poly() = default;
  Poly(double origin, std::vector<long double> coef);

  [[nodiscard]] double origin() const noexcept { return origin_; }
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] const std::vector<long double>& coef() const noexcept { return c_; }
  [[nodiscard]] bool is_zero() const noexcept;

  [[nodiscard]] long double eval(double x) const;
  [[nodiscard]] long double deriv(int k, double x) const;
  // p(x), p'(x), ..., p^(n)(x)
  [[nodiscard]] std::vector<long double> derivs(double x, int n) const;

  [[nodiscard]] Poly derivative(int k = 1) const;
  [[nodiscard]] Poly antiderivative() const;  ///< vanishes at origin
  [[nodiscard]] Poly recentered(double new_origin) const;
  [[nodiscard]] Poly shifted_argument(double h) const;  ///< x -> p(x + h)

  Poly& operator+=(const Poly& other);  ///< other is recentered to this origin
  Poly& operator*=(long double s);

 private:
  double origin_ = 0.0;
  std::vector<long double> c_;
};

}  // namespace ultrajet
