#include "ultrajet/jets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ultrajet/error.hpp"

namespace ultrajet {

// ---------------------------------------------------------------------------
// Compact sets

CompactSet1D CompactSet1D::make(std::vector<double> points, std::vector<std::pair<double, double>> intervals) {
  CompactSet1D E;
  std::sort(intervals.begin(), intervals.end());
  for (const auto& [lo, hi] : intervals) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw Error(ErrorCode::InvalidArgument, "interval needs lo <= hi");
    if (lo == hi) {
      points.push_back(lo);
      continue;
    }
    if (!E.intervals.empty() && lo <= E.intervals.back().second)
      throw Error(ErrorCode::InvalidArgument, "intervals must be disjoint");
    E.intervals.emplace_back(lo, hi);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (double x : points) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite point");
    const bool inside = std::any_of(E.intervals.begin(), E.intervals.end(),
                                    [x](const auto& iv) { return iv.first <= x && x <= iv.second; });
    if (!inside) E.points.push_back(x);
  }
  if (E.points.empty() && E.intervals.empty()) throw Error(ErrorCode::InvalidArgument, "compact set is empty");
  return E;
}

std::vector<std::pair<double, double>> CompactSet1D::components() const {
  std::vector<std::pair<double, double>> c = intervals;
  for (double x : points) c.emplace_back(x, x);
  std::sort(c.begin(), c.end());
  return c;
}

double CompactSet1D::hull_lo() const { return components().front().first; }
double CompactSet1D::hull_hi() const { return components().back().second; }

bool CompactSet1D::contains(double x) const { return nearest_point(*this, x).d == 0.0; }

Nearest nearest_point(const CompactSet1D& E, double x) {
  Nearest best{0.0, INFINITY};
  for (const auto& [lo, hi] : E.components()) {
    Nearest c{};
    if (x < lo) c = {lo, lo - x};
    else if (x > hi) c = {hi, x - hi};
    else c = {x, 0.0};
    if (c.d < best.d) best = c;  // strict: ties keep the smaller coordinate
  }
  return best;
}

std::vector<double> carried_points(const CompactSet1D& E, double grid_fraction) {
  std::vector<double> pts = E.points;
  const int n = std::max(1, static_cast<int>(std::lround(1.0 / grid_fraction)));
  for (const auto& [lo, hi] : E.intervals)
    for (int i = 0; i <= n; ++i) pts.push_back(lo + (hi - lo) * i / n);
  std::sort(pts.begin(), pts.end());
  return pts;
}

// ---------------------------------------------------------------------------
// Jets

Jet::Jet(CompactSet1D E, int p_max, std::vector<double> carried, std::vector<std::vector<double>> values)
    : E_(std::move(E)), p_max_(p_max), pts_(std::move(carried)), vals_(std::move(values)) {
  if (p_max_ < 0) throw Error(ErrorCode::InvalidArgument, "order cap must be >= 0");
  if (pts_.empty() || pts_.size() != vals_.size())
    throw Error(ErrorCode::InvalidArgument, "one value row per carried point");
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (i > 0 && !(pts_[i] > pts_[i - 1])) throw Error(ErrorCode::InvalidArgument, "carried points must increase");
    if (!E_.contains(pts_[i])) throw Error(ErrorCode::InvalidArgument, "carried point outside E");
    if (vals_[i].size() != static_cast<std::size_t>(p_max_) + 1)
      throw Error(ErrorCode::InvalidArgument, "every carried point needs orders 0..p_max");
    for (double v : vals_[i])
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "jet values must be finite");
  }
}

double Jet::value(std::size_t i, int k) const {
  if (k < 0 || k > p_max_) throw Error(ErrorCode::OrderExceeded, "order " + std::to_string(k));
  return vals_.at(i)[static_cast<std::size_t>(k)];
}

std::size_t Jet::carried_index_near(double x) const {
  const auto it = std::lower_bound(pts_.begin(), pts_.end(), x);
  if (it == pts_.begin()) return 0;
  if (it == pts_.end()) return pts_.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - pts_.begin());
  return (x - pts_[hi - 1] <= pts_[hi] - x) ? hi - 1 : hi;
}

Jet Jet::scaled(double c) const {
  auto v = vals_;
  for (auto& row : v)
    for (auto& x : row) x *= c;
  return Jet(E_, p_max_, pts_, std::move(v));
}

Jet Jet::plus(const Jet& other) const {
  if (other.pts_ != pts_ || other.p_max_ != p_max_)
    throw Error(ErrorCode::InvalidArgument, "jets must share carried points and order cap");
  auto v = vals_;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t k = 0; k < v[i].size(); ++k) v[i][k] += other.vals_[i][k];
  return Jet(E_, p_max_, pts_, std::move(v));
}

Poly taylor_poly(const Jet& F, std::size_t a, int p) {
  if (p > F.p_max() || p < 0) throw Error(ErrorCode::OrderExceeded, "taylor degree " + std::to_string(p));
  std::vector<long double> c(static_cast<std::size_t>(p) + 1);
  long double fact = 1.0L;
  for (int j = 0; j <= p; ++j) {
    if (j > 0) fact *= j;
    c[static_cast<std::size_t>(j)] = static_cast<long double>(F.value(a, j)) / fact;
  }
  return Poly(F.point(a), std::move(c));
}

double remainder(const Jet& F, std::size_t a, std::size_t b, int p, int k) {
  if (p > F.p_max() || k > p || k < 0) throw Error(ErrorCode::OrderExceeded, "remainder order");
  const long double h = static_cast<long double>(F.point(b)) - F.point(a);
  long double sum = 0.0L;
  long double term = 1.0L;  // h^j / j!
  for (int j = 0; j <= p - k; ++j) {
    if (j > 0) term *= h / j;
    sum += term * F.value(a, k + j);
  }
  return static_cast<double>(F.value(b, k) - sum);
}

// ---------------------------------------------------------------------------
// Norm profiles

namespace {

struct Constraint {
  double base;  ///< log of the ratio at rho = 1
  int order;    ///< exponent of rho
};

std::vector<Constraint> collect(const Jet& F, const std::vector<double>& log_M) {
  std::vector<Constraint> cs;
  const int P = F.p_max();
  for (std::size_t a = 0; a < F.size(); ++a)
    for (int k = 0; k <= P; ++k) {
      const double v = std::abs(F.value(a, k));
      if (v > 0) cs.push_back({std::log(v) - log_M[static_cast<std::size_t>(k)], k});
    }
  for (std::size_t a = 0; a < F.size(); ++a)
    for (std::size_t b = 0; b < F.size(); ++b) {
      if (a == b) continue;
      const double lh = std::log(std::abs(F.point(b) - F.point(a)));
      for (int p = 0; p < P; ++p)
        for (int k = 0; k <= p; ++k) {
          const double r = std::abs(remainder(F, a, b, p, k));
          if (r == 0) continue;
          cs.push_back({std::log(r) - log_M[static_cast<std::size_t>(p) + 1] - (p + 1 - k) * lh +
                            std::lgamma(p + 2.0 - k),
                        p + 1});
        }
    }
  return cs;
}

}  // namespace

std::vector<double> default_rho_grid() {
  std::vector<double> g;
  for (int j = -4; j <= 10; ++j) g.push_back(std::ldexp(1.0, j));
  return g;
}

JetNormProfile jet_norm_profile(const Jet& F, const WeightSequence& M, const std::vector<double>& rho_grid) {
  if (M.K() < F.p_max() + 1) throw Error(ErrorCode::OrderExceeded, "weight prefix shorter than jet order");
  JetNormProfile prof;
  prof.rho_grid = rho_grid;
  prof.sampled_intervals = F.set().has_intervals();
  const auto cs = collect(F, M.log_values());
  for (double rho : rho_grid) {
    double c = -INFINITY;
    for (const auto& x : cs) c = std::max(c, x.base - x.order * std::log(rho));
    prof.C_of_rho.push_back(cs.empty() ? 0.0 : std::exp(c));
  }
  // rho required at each order, for the class-membership trend
  std::vector<double> lr(static_cast<std::size_t>(F.p_max()) + 1, -INFINITY);
  for (const auto& x : cs)
    if (x.order > 0) lr[static_cast<std::size_t>(x.order)] = std::max(lr[static_cast<std::size_t>(x.order)], x.base / x.order);
  std::vector<double> trend;
  for (int k = 1; k <= F.p_max(); ++k) {
    prof.order_rho.push_back(std::exp(lr[static_cast<std::size_t>(k)]));
    if (std::isfinite(lr[static_cast<std::size_t>(k)])) trend.push_back(lr[static_cast<std::size_t>(k)]);
  }
  prof.trend = judge_bounded(std::span<const double>(trend), F.p_max(), {});
  prof.not_in_class = prof.trend.fails();
  if (!prof.C_of_rho.empty()) {
    const double limit = prof.C_of_rho.back();
    for (std::size_t i = 0; i < rho_grid.size(); ++i)
      if (prof.C_of_rho[i] <= 2.0 * limit) {
        prof.verdict_rho = rho_grid[i];
        break;
      }
  }
  return prof;
}

double factorial_form_constant(const Jet& F, const WeightSequence& s, double rho) {
  const int P = F.p_max();
  if (s.K() < P + 1) throw Error(ErrorCode::OrderExceeded, "weight prefix shorter than jet order");
  const double lr = std::log(rho);
  double c = -INFINITY;
  for (std::size_t a = 0; a < F.size(); ++a)
    for (int k = 0; k <= P; ++k) {
      const double v = std::abs(F.value(a, k));
      if (v > 0) c = std::max(c, std::log(v) - k * lr - std::lgamma(k + 1.0) - s.log_M(k));
    }
  for (std::size_t a = 0; a < F.size(); ++a)
    for (std::size_t b = 0; b < F.size(); ++b) {
      if (a == b) continue;
      const double lh = std::log(std::abs(F.point(b) - F.point(a)));
      for (int p = 0; p < P; ++p)
        for (int k = 0; k <= p; ++k) {
          const double r = std::abs(remainder(F, a, b, p, k));
          if (r == 0) continue;
          c = std::max(c, std::log(r) - (p + 1) * lr - std::lgamma(k + 1.0) - s.log_M(p + 1) - (p + 1 - k) * lh);
        }
    }
  return std::isfinite(c) ? std::exp(c) : 0.0;
}

FittedJetConstants fit_jet_constants(const Jet& F, const WeightSequence& small_s) {
  std::vector<double> lS(static_cast<std::size_t>(small_s.K()) + 1);
  for (int k = 0; k <= small_s.K(); ++k) lS[static_cast<std::size_t>(k)] = small_s.log_M(k) + std::lgamma(k + 1.0);
  const WeightSequence S = WeightSequence::from_log_values(std::move(lS), {"descendant_values", {}});
  FittedJetConstants out;
  out.profile = jet_norm_profile(F, S, default_rho_grid());
  if (out.profile.not_in_class)
    throw Error(ErrorCode::JetNotInClass, "required rho grows with the order: " + out.profile.trend.note);
  // factorial form: (p+1)!/((p+1-k)! k!) <= 2^{p+1}
  out.rho = 2.0 * out.profile.verdict_rho.value_or(1.0);
  out.C = factorial_form_constant(F, small_s, out.rho);
  return out;
}

// ---------------------------------------------------------------------------
// Sampling analytic functions

std::vector<double> analytic_derivs(const AnalyticSpec& f, double x, int n) {
  std::vector<double> d(static_cast<std::size_t>(n) + 1, 0.0);
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, analytic::Exp>) {
          std::fill(d.begin(), d.end(), std::exp(x));
        } else if constexpr (std::is_same_v<T, analytic::Sin>) {
          const double s = std::sin(x);
          const double c = std::cos(x);
          for (int k = 0; k <= n; ++k) {
            const double cyc[4] = {s, c, -s, -c};
            d[static_cast<std::size_t>(k)] = cyc[k % 4];
          }
        } else if constexpr (std::is_same_v<T, analytic::Polynomial>) {
          std::vector<long double> c(g.coeffs.begin(), g.coeffs.end());
          if (c.empty()) c.push_back(0.0L);
          const auto v = Poly(0.0, c).derivs(x, n);
          for (int k = 0; k <= n; ++k) d[static_cast<std::size_t>(k)] = static_cast<double>(v[static_cast<std::size_t>(k)]);
        } else {
          const Poly P = Poly(0.0, std::vector<long double>(g.p.begin(), g.p.end())).recentered(x);
          const Poly Q = Poly(0.0, std::vector<long double>(g.q.begin(), g.q.end())).recentered(x);
          const auto& pc = P.coef();
          const auto& qc = Q.coef();
          if (qc.empty() || qc[0] == 0.0L) throw Error(ErrorCode::PoleOnSet, "denominator vanishes");
          std::vector<long double> t(static_cast<std::size_t>(n) + 1, 0.0L);
          long double fact = 1.0L;
          for (int k = 0; k <= n; ++k) {
            long double acc = static_cast<std::size_t>(k) < pc.size() ? pc[static_cast<std::size_t>(k)] : 0.0L;
            for (int i = 1; i <= k && static_cast<std::size_t>(i) < qc.size(); ++i)
              acc -= qc[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(k - i)];
            t[static_cast<std::size_t>(k)] = acc / qc[0];
            if (k > 0) fact *= k;
            d[static_cast<std::size_t>(k)] = static_cast<double>(t[static_cast<std::size_t>(k)] * fact);
          }
        }
      },
      f);
  return d;
}

Jet sample_jet(const AnalyticSpec& f, const CompactSet1D& E, int p_max) {
  if (const auto* r = std::get_if<analytic::Rational>(&f)) {
    const Poly Q(0.0, std::vector<long double>(r->q.begin(), r->q.end()));
    const double lo = E.hull_lo();
    const double hi = E.hull_hi();
    const int G = lo < hi ? 10000 : 0;
    double qmax = 0.0;
    std::vector<double> qs;
    for (int i = 0; i <= G; ++i) {
      const double x = G ? lo + (hi - lo) * i / G : lo;
      qs.push_back(static_cast<double>(Q.eval(x)));
      qmax = std::max(qmax, std::abs(qs.back()));
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (std::abs(qs[i]) <= 1e-14 * qmax || qmax == 0.0 || (i > 0 && (qs[i] > 0) != (qs[i - 1] > 0)))
        throw Error(ErrorCode::PoleOnSet, "denominator vanishes on the hull of E");
    }
  }
  const auto pts = carried_points(E);
  std::vector<std::vector<double>> vals;
  for (double x : pts) vals.push_back(analytic_derivs(f, x, p_max));
  return Jet(E, p_max, pts, std::move(vals));
}

// ---------------------------------------------------------------------------
// Two variables

namespace {
double value2(const Jet2D& F, std::size_t i, int a1, int a2) {
  const auto& m = F.values.at(i);
  const auto it = m.find({a1, a2});
  if (it == m.end()) throw Error(ErrorCode::OrderExceeded, "missing multi-index value");
  return it->second;
}
}  // namespace

double taylor_deriv_2d(const Jet2D& F, std::size_t a, int p, std::pair<int, int> alpha, std::array<double, 2> x) {
  if (p > F.p_max) throw Error(ErrorCode::OrderExceeded, "taylor degree");
  const double h1 = x[0] - F.points.at(a)[0];
  const double h2 = x[1] - F.points.at(a)[1];
  long double s = 0.0L;
  for (int g1 = 0; alpha.first + g1 <= p; ++g1)
    for (int g2 = 0; alpha.first + alpha.second + g1 + g2 <= p; ++g2) {
      const long double c = std::pow(h1, g1) * std::pow(h2, g2) / (std::tgamma(g1 + 1.0) * std::tgamma(g2 + 1.0));
      s += c * value2(F, a, alpha.first + g1, alpha.second + g2);
    }
  return static_cast<double>(s);
}

double remainder_2d(const Jet2D& F, std::size_t a, std::size_t b, int p, std::pair<int, int> alpha) {
  if (alpha.first + alpha.second > p) throw Error(ErrorCode::OrderExceeded, "remainder order");
  return value2(F, b, alpha.first, alpha.second) - taylor_deriv_2d(F, a, p, alpha, F.points.at(b));
}

}  // namespace ultrajet
