#include "ultrajet/spline.hpp"

#include <algorithm>
#include <cmath>

#include "ultrajet/error.hpp"

namespace ultrajet {

namespace {
constexpr double kDedup = 1e-12;

long double factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Poly> pieces,
                                         int smoothness)
    : bp_(std::move(breakpoints)), pieces_(std::move(pieces)), smooth_(smoothness) {
  if (!bp_.empty() && pieces_.size() + 1 != bp_.size())
    throw Error(ErrorCode::InvalidArgument, "spline needs one piece per breakpoint interval");
}

PiecewisePolynomial PiecewisePolynomial::indicator(double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "indicator needs lo < hi");
  return PiecewisePolynomial({lo, hi}, {Poly(lo, {1.0L})}, -1);
}

int PiecewisePolynomial::max_degree() const {
  int d = 0;
  for (const auto& p : pieces_) d = std::max(d, p.degree());
  return d;
}

long PiecewisePolynomial::piece_index(double x) const {
  if (bp_.empty() || x < bp_.front()) return -1;
  if (x >= bp_.back()) return static_cast<long>(pieces_.size());
  const auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
  return static_cast<long>(it - bp_.begin()) - 1;
}

double PiecewisePolynomial::eval(double x) const { return deriv(0, x); }

double PiecewisePolynomial::deriv(int k, double x) const {
  const long i = piece_index(x);
  if (i < 0 || i >= static_cast<long>(pieces_.size())) return 0.0;
  return static_cast<double>(pieces_[static_cast<std::size_t>(i)].deriv(k, x));
}

std::vector<double> PiecewisePolynomial::derivs(double x, int n) const {
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  const long i = piece_index(x);
  if (i < 0 || i >= static_cast<long>(pieces_.size())) return out;
  const auto& p = pieces_[static_cast<std::size_t>(i)];
  for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = static_cast<double>(p.deriv(k, x));
  return out;
}

double PiecewisePolynomial::integral() const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < pieces_.size(); ++i) s += pieces_[i].antiderivative().eval(bp_[i + 1]);
  return static_cast<double>(s);
}

double PiecewisePolynomial::max_jump(int k) const {
  // jumps are measured against the largest |f^(k)| seen at any breakpoint
  double scale = 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double x = bp_[i + 1];
    const double left = static_cast<double>(pieces_[i].deriv(k, x));
    const double right = i + 1 < pieces_.size() ? static_cast<double>(pieces_[i + 1].deriv(k, x)) : 0.0;
    const double start = static_cast<double>(pieces_[i].deriv(k, bp_[i]));
    const double before = i > 0 ? static_cast<double>(pieces_[i - 1].deriv(k, bp_[i])) : 0.0;
    scale = std::max({scale, std::abs(left), std::abs(right), std::abs(start)});
    worst = std::max({worst, std::abs(left - right), std::abs(start - before)});
  }
  return worst / scale;
}

PiecewisePolynomial PiecewisePolynomial::box_convolve(double w) const {
  if (!(w > 0)) throw Error(ErrorCode::InvalidArgument, "box width must be positive");
  if (pieces_.empty()) return *this;
  const double h = 0.5 * w;
  const long n = static_cast<long>(pieces_.size());

  std::vector<double> nb;
  nb.reserve(2 * bp_.size());
  for (double b : bp_) {
    nb.push_back(b - h);
    nb.push_back(b + h);
  }
  std::sort(nb.begin(), nb.end());
  std::vector<double> dedup;
  for (double b : nb)
    if (dedup.empty() || b - dedup.back() > kDedup * std::max(1.0, std::abs(b))) dedup.push_back(b);

  // antiderivatives anchored at the right end (lower partial) and left end (upper partial)
  std::vector<Poly> anchored_right(static_cast<std::size_t>(n));
  std::vector<Poly> anchored_left(static_cast<std::size_t>(n));
  std::vector<long double> full(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const auto& p = pieces_[static_cast<std::size_t>(i)];
    anchored_left[static_cast<std::size_t>(i)] = p.antiderivative();
    anchored_right[static_cast<std::size_t>(i)] = p.recentered(bp_[static_cast<std::size_t>(i) + 1]).antiderivative();
    full[static_cast<std::size_t>(i)] = anchored_left[static_cast<std::size_t>(i)].eval(bp_[static_cast<std::size_t>(i) + 1]);
  }

  std::vector<Poly> out;
  out.reserve(dedup.size());
  const long double inv_w = 1.0L / static_cast<long double>(w);
  for (std::size_t j = 0; j + 1 < dedup.size(); ++j) {
    const double cl = dedup[j];
    const double mid = 0.5 * (dedup[j] + dedup[j + 1]);
    const long A = piece_index(mid - h);
    const long B = piece_index(mid + h);
    Poly g(cl, {0.0L});
    if (A == B) {
      if (A >= 0 && A < n) {
        // (1/2h) int_{x-h}^{x+h} P = sum_m P^(2m)(x) h^(2m) / (2m+1)!
        const Poly P = pieces_[static_cast<std::size_t>(A)].recentered(cl);
        long double hp = 1.0L;
        for (int m = 0; 2 * m <= P.degree(); ++m) {
          Poly d = P.derivative(2 * m);
          d *= hp / factorial(2 * m + 1);
          g += d;
          hp *= static_cast<long double>(h) * static_cast<long double>(h);
        }
      }
    } else {
      if (A >= 0) {  // int_{x-h}^{b_{A+1}} P_A = -Q(x - h), Q anchored at b_{A+1}
        Poly q = anchored_right[static_cast<std::size_t>(A)].shifted_argument(-h).recentered(cl);
        q *= -1.0L;
        g += q;
      }
      long double middle = 0.0L;
      for (long i = std::max(A + 1, 0L); i <= std::min(B - 1, n - 1); ++i) middle += full[static_cast<std::size_t>(i)];
      g += Poly(cl, {middle});
      if (B < n) {  // int_{b_B}^{x+h} P_B
        g += anchored_left[static_cast<std::size_t>(B)].shifted_argument(h).recentered(cl);
      }
      g *= inv_w;
    }
    out.push_back(std::move(g));
  }
  return PiecewisePolynomial(std::move(dedup), std::move(out), smooth_ + 1);
}

PiecewisePolynomial smooth_indicator(double lo, double hi, const std::vector<double>& widths) {
  PiecewisePolynomial f = PiecewisePolynomial::indicator(lo, hi);
  for (double w : widths) f = f.box_convolve(w);
  return f;
}

}  // namespace ultrajet
