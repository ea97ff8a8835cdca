#include "ultrajet/polynomial.hpp"

#include <algorithm>

namespace ultrajet {

Poly::Poly(double origin, std::vector<long double> coef) : origin_(origin), c_(std::move(coef)) {}

bool Poly::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](long double v) { return v == 0.0L; });
}

long double Poly::eval(double x) const {
  const long double u = static_cast<long double>(x) - origin_;
  long double acc = 0.0L;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

long double Poly::deriv(int k, double x) const {
  if (k < 0 || k > degree()) return 0.0L;
  const long double u = static_cast<long double>(x) - origin_;
  long double acc = 0.0L;
  for (int j = degree(); j >= k; --j) {
    long double ff = 1.0L;  // j!/(j-k)!
    for (int i = 0; i < k; ++i) ff *= static_cast<long double>(j - i);
    acc = acc * u + c_[static_cast<std::size_t>(j)] * ff;
  }
  return acc;
}

std::vector<long double> Poly::derivs(double x, int n) const {
  // Taylor shift to x gives all derivatives at once: p^(k)(x) = k! * shifted c_k
  const Poly q = recentered(x);
  std::vector<long double> out(static_cast<std::size_t>(n) + 1, 0.0L);
  long double fact = 1.0L;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) fact *= k;
    if (k <= q.degree()) out[static_cast<std::size_t>(k)] = q.c_[static_cast<std::size_t>(k)] * fact;
  }
  return out;
}

Poly Poly::derivative(int k) const {
  if (k > degree()) return Poly(origin_, {0.0L});
  std::vector<long double> d(c_.size() - static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < d.size(); ++j) {
    long double ff = 1.0L;
    for (int i = 1; i <= k; ++i) ff *= static_cast<long double>(j + static_cast<std::size_t>(i));
    d[j] = c_[j + static_cast<std::size_t>(k)] * ff;
  }
  return Poly(origin_, std::move(d));
}

Poly Poly::antiderivative() const {
  std::vector<long double> a(c_.size() + 1, 0.0L);
  for (std::size_t j = 0; j < c_.size(); ++j) a[j + 1] = c_[j] / static_cast<long double>(j + 1);
  return Poly(origin_, std::move(a));
}

Poly Poly::recentered(double new_origin) const {
  // repeated synthetic division by (u - delta)
  std::vector<long double> c = c_;
  const long double delta = static_cast<long double>(new_origin) - origin_;
  if (delta != 0.0L) {
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) c[j - 1] += delta * c[j];
  }
  return Poly(new_origin, std::move(c));
}

Poly Poly::shifted_argument(double h) const { return Poly(origin_ - h, c_); }

Poly& Poly::operator+=(const Poly& other) {
  const Poly o = other.origin_ == origin_ ? other : other.recentered(origin_);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0L);
  for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
  return *this;
}

Poly& Poly::operator*=(long double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

}  // namespace ultrajet
