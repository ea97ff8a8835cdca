#pragma once

#include <algorithm>
#include <cmath>

namespace ultrajet {

namespace detail {
template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // relative floor keeps roundoff from driving the recursion to full depth
  const double tol = std::max(15.0 * eps, 1e-13 * (std::abs(left) + std::abs(right)));
  if (depth <= 0 || std::abs(delta) <= tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature with absolute tolerance eps.
template <class F>
double adaptive_simpson(F f, double a, double b, double eps, int max_depth = 30) {
  // split into a few panels first so narrow features are not missed
  const int panels = 16;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + (b - a) * i / panels;
    const double x1 = a + (b - a) * (i + 1) / panels;
    const double f0 = f(x0);
    const double f1 = f(x1);
    const double fm = f(0.5 * (x0 + x1));
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += detail::simpson_step(f, x0, x1, f0, fm, f1, whole, eps / panels, max_depth);
  }
  return total;
}

}  // namespace ultrajet
