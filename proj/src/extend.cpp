#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ultrajet/error.hpp"
#include "ultrajet/extend.hpp"

namespace ultrajet {

namespace {

double binom(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

std::vector<double> leibniz(const std::vector<double>& a, const std::vector<double>& b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= k; ++j)
      out[static_cast<std::size_t>(k)] += binom(k, j) * a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
  return out;
}

double log_inv_h(const WeightSequence& s, double log_t) { return -h_assoc_log(s, log_t).log_value; }

// sum_{m = lo..hi} F^m(a) h^{m-j}/(m-j)!, the j-th derivative of a Taylor segment
double segment(const Jet& F, std::size_t a, int lo, int hi, double h, int j) {
  long double s = 0.0L;
  for (int m = std::max(lo, j); m <= hi; ++m)
    s += static_cast<long double>(F.value(a, m)) * std::pow(static_cast<long double>(h), m - j) /
         std::tgamma(static_cast<long double>(m - j + 1));
  return static_cast<double>(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition of unity

CheckReport check_h_power(const WeightSequence& s, const WeightSequence& sdot, int n0) {
  CheckReport rep;
  rep.prefix_K = s.K();
  const double lo = -s.log_mu(std::max(1, s.K() / 2));
  const double hi = -s.log_mu(1);
  if (!(hi > lo)) {
    rep.note = "quotients do not spread over the prefix";
    return rep;
  }
  std::vector<double> grid;
  for (int g = 0; g <= 64; ++g) grid.push_back(lo + (hi - lo) * g / 64.0);
  for (int j = 0; j <= 40; ++j) {
    const double lA = j * std::log(2.0);
    const bool ok = std::all_of(grid.begin(), grid.end(), [&](double lt) {
      return h_assoc_log(s, lt).log_value <= n0 * h_assoc_log(sdot, lt + lA).log_value + 1e-12;
    });
    if (ok) {
      rep.verdict = Verdict::HoldsUpToK;
      rep.witness_constant = std::exp(lA);
      return rep;
    }
  }
  rep.verdict = Verdict::NotWitnessedInSample;
  rep.note = "no A up to 2^40";
  return rep;
}

PartitionOfUnity::PartitionOfUnity(WhitneyCover1D cover, std::shared_ptr<const CutoffFamily> fam, double epsilon,
                                   double A_power, WeightSequence s_in)
    : cover_(std::move(cover)), fam_(std::move(fam)), eps_(epsilon), A_power_(A_power), s_in_(std::move(s_in)) {
  if (!(epsilon > 0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const double n0 = cover_.n0;
  B1_ = fam_->B() * (cover_.c - 1.0) / (A_power_ * n0 * cover_.b);
  for (const Ball& B : cover_.balls) cut_.push_back(&fam_->build(eps_ * B.r / n0, cover_.c));
}

std::pair<double, double> PartitionOfUnity::support(std::size_t i) const {
  const Ball& B = cover_.balls.at(i);
  return {B.x + B.r * cut_[i]->support_lo(), B.x + B.r * cut_[i]->support_hi()};
}

std::vector<double> PartitionOfUnity::psi(std::size_t i, double x, int n) const {
  const Ball& B = cover_.balls.at(i);
  auto d = cut_[i]->derivs((x - B.x) / B.r, n);
  double scale = 1.0;
  for (auto& v : d) {
    v *= scale;
    scale /= B.r;
  }
  return d;
}

std::vector<std::pair<std::size_t, std::vector<double>>> PartitionOfUnity::phis(double x, int n) const {
  std::vector<std::pair<std::size_t, std::vector<double>>> out;
  std::vector<double> prod(static_cast<std::size_t>(n) + 1, 0.0);
  prod[0] = 1.0;
  for (std::size_t i : cover_.active(x)) {
    const auto p = psi(i, x, n);
    out.emplace_back(i, leibniz(p, prod, n));
    auto one_minus = p;
    for (auto& v : one_minus) v = -v;
    one_minus[0] += 1.0;
    prod = leibniz(prod, one_minus, n);
  }
  return out;
}

double PartitionOfUnity::sum(double x) const {
  double s = 0.0;
  for (const auto& [i, d] : phis(x, 0)) s += d[0];
  return s;
}

double PartitionOfUnity::log_bound(double x, int k) const {
  const double d = nearest_point(cover_.set(), x).d;
  return k * std::log(eps_) + fam_->Ndot().log_M(k) + log_inv_h(s_in_, std::log(B1_ * eps_ * d));
}

PartitionRows select_partition_rows(const WeightMatrix& Nm, std::size_t input, int n0,
                                    std::optional<std::size_t> start) {
  const WeightSequence s = descend(Nm.row(input)).small_s;
  for (std::size_t j = start.value_or(input); j < Nm.size(); ++j) {
    const CheckReport r = check_h_power(s, descend(Nm.row(j)).small_s, n0);
    if (!r.holds()) continue;
    const auto up = find_doubling_row(Nm, j);
    const auto cov = find_cover_row(Nm, j);
    if (!up || !cov) break;
    return {j, std::max(up->first, cov->first), r.witness_constant.value_or(1.0)};
  }
  throw Error(ErrorCode::RowChainUnavailable, "no sampled row satisfies the h-power relation and has a row above it");
}

std::pair<PartitionOfUnity, PartitionRows> partition_with_rows(const WhitneyCover1D& cover, const WeightMatrix& Nm,
                                                               std::size_t input, double epsilon, int conv_depth) {
  const WeightSequence s_in = descend(Nm.row(input)).small_s;
  std::optional<std::size_t> start;
  std::string last;
  while (true) {
    const PartitionRows pr = select_partition_rows(Nm, input, cover.n0, start);
    try {
      auto fam = std::make_shared<const CutoffFamily>(Nm.row(pr.Ndot_p), Nm.row(pr.Nddot_p), conv_depth);
      return {PartitionOfUnity(cover, std::move(fam), epsilon, pr.A_power, s_in), pr};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DepthInsufficient && e.code() != ErrorCode::ATooSmall) throw;
      last = e.what();
    }
    start = pr.Ndot_p + 1;
    if (*start >= Nm.size()) throw Error(ErrorCode::DepthInsufficient, "every sampled row too shallow: " + last);
  }
}

PartitionCheck verify_partition(const PartitionOfUnity& P, int max_order, int probes) {
  PartitionCheck c;
  c.max_order = max_order;
  const WhitneyCover1D& W = P.cover();
  const double c_ = W.c;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto [lo, hi] = P.support(i);
    const Ball& B = W.balls[i];
    if (lo < B.x - c_ * B.r || hi > B.x + c_ * B.r) c.supports_ok = false;
  }
  std::vector<double> xs;
  for (int i = 0; i < probes; ++i) xs.push_back(W.domain_lo + (W.domain_hi - W.domain_lo) * (i + 0.5) / probes);
  for (const Ball& B : W.balls)
    for (double dist = 0.25; dist > 4 * W.d_min; dist /= 2) {
      xs.push_back(B.xhat + dist);
      xs.push_back(B.xhat - dist);
    }
  for (double x : xs) {
    if (!W.covered(x) || nearest_point(W.set(), x).d < W.d_min) continue;
    ++c.probes;
    double s = 0.0;
    for (const auto& [i, d] : P.phis(x, max_order)) {
      s += d[0];
      if (d[0] < -1e-12 || d[0] > 1.0 + 1e-12) c.range_ok = false;
      for (int k = 0; k <= max_order; ++k) {
        const double v = std::abs(d[static_cast<std::size_t>(k)]);
        if (v > 0 && std::log(v) > P.log_bound(x, k) + 1e-9) ++c.bound_violations;
      }
    }
    c.max_sum_error = std::max(c.max_sum_error, std::abs(s - 1.0));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Row chain

namespace {
std::optional<std::size_t> step_up(const WeightMatrix& Nm, std::size_t i) {
  const auto up = find_doubling_row(Nm, i);
  const auto cov = find_cover_row(Nm, i);
  if (!up || !cov) return std::nullopt;
  return std::max(up->first, cov->first);
}
}  // namespace

RowChain select_row_chain(const WeightMatrix& Nm, std::size_t base, int n0) {
  RowChain ch;
  ch.N = base;
  const auto d1 = step_up(Nm, base);
  if (!d1) throw Error(ErrorCode::RowChainUnavailable, "no sampled row above the base row");
  ch.Ndot = *d1;
  const auto d2 = step_up(Nm, ch.Ndot);
  if (!d2) throw Error(ErrorCode::RowChainUnavailable, "no sampled row two steps above the base row");
  const WeightSequence sdot = descend(Nm.row(ch.Ndot)).small_s;
  bool found = false;
  for (std::size_t j = *d2; j < Nm.size() && !found; ++j) {
    const MixedGrowthReport mg = check_mixed_growth(sdot, descend(Nm.row(j)).small_s);
    if (mg.h_square.holds()) {
      ch.Nddot = j;
      ch.D = mg.h_square.witness_constant.value_or(1.0);
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::RowChainUnavailable, "no sampled row gives the squared h relation");
  const PartitionRows pr = select_partition_rows(Nm, ch.Ndot, n0);
  ch.Ndot_p = pr.Ndot_p;
  ch.Nddot_p = pr.Nddot_p;
  ch.A_power = pr.A_power;
  return ch;  // partition rows may still move up when the cutoffs run out of depth
}

// ---------------------------------------------------------------------------
// Extension

Extension::Extension(Jet F, std::shared_ptr<const WeightMatrix> Nm, RowChain chain, PartitionOfUnity P,
                     std::shared_ptr<const CutoffFamily> global_fam, double L, double C, double rho)
    : F_(std::move(F)), Nm_(std::move(Nm)), chain_(chain), P_(std::move(P)), gfam_(std::move(global_fam)),
      L_(L), C_(C), rho_(rho), S_(descend(Nm_->row(chain_.N))), Sdot_(descend(Nm_->row(chain_.Ndot))) {
  // 1 on {d <= 1/2}, supported in {d < 1}: groups of components closer than 2 share one bump
  const auto comps = F_.set().components();
  std::vector<std::pair<double, double>> groups;
  for (const auto& [lo, hi] : comps) {
    if (!groups.empty() && lo - groups.back().second < 2.0) groups.back().second = hi;
    else groups.emplace_back(lo, hi);
  }
  const auto w = gfam_->widths(1.0, 1.5);
  for (const auto& [lo, hi] : groups) global_.push_back(smooth_indicator(lo - 0.75, hi + 0.75, w));
}

int Extension::degree_at(double d) const {
  if (d <= 0) return F_.p_max();
  try {
    return std::min(2 * gamma_count_log(Sdot_.small_s, std::log(L_ * d)), F_.p_max());
  } catch (const Error&) {
    return F_.p_max();
  }
}

std::vector<int> Extension::ball_degrees() const {
  std::vector<int> deg;
  for (const Ball& B : P_.cover().balls) deg.push_back(degree_at(B.d));
  return deg;
}

double Extension::global_cutoff(double x) const { return global_derivs(x, 0)[0]; }

std::vector<double> Extension::global_derivs(double x, int n) const {
  std::vector<double> g(static_cast<std::size_t>(n) + 1, 0.0);
  for (const auto& piece : global_) {
    const auto d = piece.derivs(x, n);
    for (int k = 0; k <= n; ++k) g[static_cast<std::size_t>(k)] += d[static_cast<std::size_t>(k)];
  }
  return g;
}

std::vector<double> Extension::taylor_derivs(double x, int n) const {
  const Nearest nb = nearest_point(F_.set(), x);
  const std::size_t a = F_.carried_index_near(nb.xhat);
  const int deg = degree_at(nb.d);
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) out[static_cast<std::size_t>(j)] = segment(F_, a, 0, deg, x - F_.point(a), j);
  return out;
}

std::vector<double> Extension::derivs(double x, int n) const {
  const Nearest nb = nearest_point(F_.set(), x);
  std::vector<double> zero(static_cast<std::size_t>(n) + 1, 0.0);
  if (nb.d >= 1.0) return zero;
  std::vector<double> u;
  const auto parts = nb.d < P_.cover().d_min ? decltype(P_.phis(x, n)){} : P_.phis(x, n);
  if (parts.empty()) {
    u = taylor_derivs(x, n);
  } else {
    // T_ref plus sum_i phi_i (T_i - T_ref), using sum phi_i = 1
    const auto& balls = P_.cover().balls;
    const Ball& R = balls[parts.front().first];
    const std::size_t ar = F_.carried_index_near(R.xhat);
    const int pr = degree_at(R.d);
    const double hr = x - F_.point(ar);
    u.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j <= n; ++j) u[static_cast<std::size_t>(j)] = segment(F_, ar, 0, pr, hr, j);
    for (const auto& [i, phi] : parts) {
      const std::size_t ai = F_.carried_index_near(balls[i].xhat);
      const int pi = degree_at(balls[i].d);
      std::vector<double> diff(static_cast<std::size_t>(n) + 1, 0.0);
      for (int j = 0; j <= n; ++j) {
        double v = 0.0;
        if (ai == ar) {
          if (pi > pr) v = segment(F_, ar, pr + 1, pi, hr, j);
          else if (pi < pr) v = -segment(F_, ar, pi + 1, pr, hr, j);
        } else {
          v = segment(F_, ai, 0, pi, x - F_.point(ai), j) - segment(F_, ar, 0, pr, hr, j);
        }
        diff[static_cast<std::size_t>(j)] = v;
      }
      const auto term = leibniz(phi, diff, n);
      for (int k = 0; k <= n; ++k) u[static_cast<std::size_t>(k)] += term[static_cast<std::size_t>(k)];
    }
  }
  if (nb.d <= 0.5) return u;
  return leibniz(global_derivs(x, n), u, n);
}

// ---------------------------------------------------------------------------
// Estimates

std::pair<double, double> check_taylor_difference_bound(const Jet& F, const WeightSequence& small_s, double C,
                                                        double rho, std::size_t a1, std::size_t a2, int p, int k,
                                                        double x) {
  if (p > F.p_max() || k > p || k < 0 || p + 1 > small_s.K())
    throw Error(ErrorCode::OrderExceeded, "Taylor difference order");
  const double lhs = std::abs(segment(F, a1, 0, p, x - F.point(a1), k) - segment(F, a2, 0, p, x - F.point(a2), k));
  const double dist = std::abs(F.point(a1) - x) + std::abs(F.point(a1) - F.point(a2));
  const double log_rhs = std::log(C) + (p + 1) * std::log(2.0 * rho) + std::lgamma(k + 1.0) + small_s.log_M(p + 1) +
                         (p + 1 - k) * std::log(dist);
  return {lhs, dist == 0.0 ? 0.0 : std::exp(log_rhs)};
}

TaylorJumpCheck check_taylor_jumps(const Extension& f, const std::vector<double>& probes, int max_order) {
  TaylorJumpCheck c;
  const Jet& F = f.jet();
  const WeightSequence& s = f.S().small_s;
  const double lC = std::log(f.C());
  const double l2L = std::log(2.0 * f.L());
  for (double x : probes) {
    const Nearest nb = nearest_point(F.set(), x);
    if (nb.d <= 0 || nb.d >= 1.0) continue;
    ++c.probes;
    const std::size_t a = F.carried_index_near(nb.xhat);
    const int deg = f.degree_at(nb.d);
    const auto T = f.taylor_derivs(x, max_order);
    for (int k = 0; k <= max_order && k + 1 <= s.K(); ++k) {
      const double base = lC + (k + 1) * l2L + std::lgamma(k + 1.0);
      const double v_der = std::abs(T[static_cast<std::size_t>(k)]);
      if (v_der > 0) {
        const double r = std::log(v_der) - (base + s.log_M(k));
        c.worst_log_ratio = std::max(c.worst_log_ratio, r);
        if (r > 1e-9) ++c.violations_derivative;
      }
      if (k < deg) {
        const double v_rem = std::abs(T[static_cast<std::size_t>(k)] - F.value(a, k));
        if (v_rem > 0) {
          const double r = std::log(v_rem) - (base + s.log_M(k + 1) + std::log(nb.d));
          c.worst_log_ratio = std::max(c.worst_log_ratio, r);
          if (r > 1e-9) ++c.violations_remainder;
        }
      }
    }
  }
  return c;
}

namespace {

std::vector<double> probe_points(const Extension& f, int probes, unsigned seed) {
  const CompactSet1D& E = f.jet().set();
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> U(E.hull_lo() - 1.0, E.hull_hi() + 1.0);
  std::vector<double> xs;
  while (static_cast<int>(xs.size()) < probes) {
    const double x = U(gen);
    const double d = nearest_point(E, x).d;
    if (d >= f.partition().cover().d_min && d < 1.0) xs.push_back(x);
  }
  for (const Ball& B : f.partition().cover().balls)
    for (double dist = 0.25; dist > 1e-4; dist /= 4) {
      for (double x : {B.xhat + dist, B.xhat - dist})
        if (std::abs(nearest_point(E, x).d - dist) < 1e-15) xs.push_back(x);
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

ExtensionVerification verify_extension(const Extension& f, int p_eval, int probes, unsigned seed) {
  ExtensionVerification v;
  const Jet& F = f.jet();
  const CompactSet1D& E = F.set();
  v.orders_checked = p_eval;

  // dyadic ladder toward every gap endpoint, from the complement side
  for (int j = 7; j >= 0; --j) v.ladder.push_back(1e-4 * std::ldexp(1.0, j));
  std::vector<double> ends;
  for (const Ball& B : f.partition().cover().balls) ends.push_back(B.xhat);
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  for (double dist : v.ladder) {
    double err = 0.0;
    for (double a : ends) {
      const std::size_t ia = F.carried_index_near(a);
      for (double x : {a - dist, a + dist}) {
        if (std::abs(nearest_point(E, x).d - dist) > 1e-15) continue;
        const auto d = f.derivs(x, p_eval);
        for (int k = 0; k <= p_eval; ++k)
          err = std::max(err, std::abs(d[static_cast<std::size_t>(k)] - F.value(ia, k)));
      }
    }
    v.ladder_error.push_back(err);
  }
  v.ladder_decreasing = true;
  for (std::size_t j = 1; j < v.ladder_error.size(); ++j)
    if (v.ladder_error[j] > v.ladder_error[j - 1] * (1.0 + 1e-9) + 1e-12) v.ladder_decreasing = false;

  // growth fit against the partition's upper row
  const auto xs = probe_points(f, probes, seed);
  const WeightSequence& Nbar = f.matrix().row(f.chain().Nddot_p);
  std::vector<double> lmax(static_cast<std::size_t>(p_eval) + 1, -INFINITY);
  for (double x : xs) {
    const auto d = f.derivs(x, p_eval);
    for (int k = 0; k <= p_eval; ++k)
      if (d[static_cast<std::size_t>(k)] != 0.0)
        lmax[static_cast<std::size_t>(k)] =
            std::max(lmax[static_cast<std::size_t>(k)], std::log(std::abs(d[static_cast<std::size_t>(k)])) - Nbar.log_M(k));
  }
  std::vector<double> trend;
  for (int k = 1; k <= p_eval; ++k)
    if (std::isfinite(lmax[static_cast<std::size_t>(k)])) trend.push_back(lmax[static_cast<std::size_t>(k)] / k);
  v.growth_trend = judge_bounded(std::span<const double>(trend), p_eval, {});
  const auto grid = default_rho_grid();
  std::vector<double> Cs;
  for (double r : grid) {
    double c = -INFINITY;
    for (int k = 0; k <= p_eval; ++k) c = std::max(c, lmax[static_cast<std::size_t>(k)] - k * std::log(r));
    Cs.push_back(std::isfinite(c) ? std::exp(c) : 0.0);
  }
  v.growth_rho = grid.back();
  v.growth_C = Cs.back();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (Cs[i] <= 2.0 * Cs.back()) {
      v.growth_rho = grid[i];
      v.growth_C = Cs[i];
      break;
    }
  v.taylor_jumps = check_taylor_jumps(f, xs, p_eval);
  return v;
}

ExtensionResult extend_jet(const Jet& F, std::shared_ptr<const WeightMatrix> Nm, const ExtendConfig& cfg) {
  if (cfg.p_max_eval > cfg.conv_depth - 2)
    throw Error(ErrorCode::DepthInsufficient, "evaluation order needs convolution depth order + 2");
  WhitneyCover1D cover = whitney_cover(F.set(), cfg.d_min, cfg.margin);
  const RowChain chain = select_row_chain(*Nm, cfg.base_row, cover.n0);
  const Descendant S = descend(Nm->row(chain.N));
  const FittedJetConstants fit = fit_jet_constants(F, S.small_s);

  ExtensionResult res;
  std::ostringstream note;
  const WeightSequence sdot = descend(Nm->row(chain.Ndot)).small_s;
  auto build = [&](double L) {
    std::optional<std::size_t> start;
    std::string last;
    while (true) {
      const PartitionRows pr = select_partition_rows(*Nm, chain.Ndot, cover.n0, start);
      start = pr.Ndot_p + 1;
      try {
        auto fam = std::make_shared<const CutoffFamily>(Nm->row(pr.Ndot_p), Nm->row(pr.Nddot_p), cfg.conv_depth);
        const double B1 = fam->B() * (cover.c - 1.0) / (pr.A_power * cover.n0 * cover.b);
        const double eps = L * cover.b * chain.D / B1;
        RowChain ch = chain;
        ch.Ndot_p = pr.Ndot_p;
        ch.Nddot_p = pr.Nddot_p;
        ch.A_power = pr.A_power;
        PartitionOfUnity P(cover, fam, eps, pr.A_power, sdot);
        return std::make_shared<const Extension>(F, Nm, ch, std::move(P), fam, L, fit.C, fit.rho);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DepthInsufficient && e.code() != ErrorCode::ATooSmall) throw;
        last = e.what();
      }
      if (*start >= Nm->size()) throw Error(ErrorCode::DepthInsufficient, "every sampled row too shallow: " + last);
    }
  };
  const double rho = fit.rho > 0 ? fit.rho : 1.0;
  if (cfg.L) {
    res.f = build(*cfg.L);
  } else {
    for (int j = 0; j <= 20; ++j) {
      auto f = build(rho * std::ldexp(1.0, j));
      const auto xs = probe_points(*f, cfg.probes, cfg.seed);
      const TaylorJumpCheck c = check_taylor_jumps(*f, xs, cfg.p_max_eval);
      res.f = f;
      if (c.ok()) break;
      if (j == 20) note << "L search reached 2^20 rho without passing the Taylor estimates; ";
    }
  }
  res.D1 = res.f->L() / rho;
  res.verification = verify_extension(*res.f, cfg.p_max_eval, cfg.probes, cfg.seed);
  note << "rows " << chain.N << "," << chain.Ndot << "," << chain.Nddot << " partition rows " << chain.Ndot_p << ","
       << chain.Nddot_p << "; " << cover.note;
  res.note = note.str();
  return res;
}

}  // namespace ultrajet
