#include "ultrajet/weightfunc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ultrajet/decide.hpp"
#include "ultrajet/error.hpp"
#include "ultrajet/numeric.hpp"

namespace ultrajet {

// ---------------------------------------------------------------------------
// WeightFunction

WeightFunction WeightFunction::omega_s(double s) {
  if (!(s > 1.0)) throw Error(ErrorCode::InvalidArgument, "omega_s needs s > 1");
  WeightFunction w;
  w.kind_ = Kind::OmegaS;
  w.s_ = s;
  return w;
}

WeightFunction WeightFunction::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "table weight needs points");
  WeightFunction w;
  w.kind_ = Kind::Table;
  w.log_t_.push_back(0.0);
  w.w_.push_back(0.0);
  for (const auto& [t, v] : points) {
    if (t <= 1.0) {
      if (v != 0.0) throw Error(ErrorCode::InvalidArgument, "omega must vanish on [0, 1]");
      continue;
    }
    if (std::log(t) <= w.log_t_.back() || v < w.w_.back() || !std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, "table points must be increasing and monotone");
    w.log_t_.push_back(std::log(t));
    w.w_.push_back(v);
  }
  if (w.log_t_.size() < 2) throw Error(ErrorCode::InvalidArgument, "table needs a point with t > 1");
  return w;
}

double WeightFunction::phi(double y) const {
  if (y <= 0.0) return 0.0;
  if (kind_ == Kind::OmegaS) return std::pow(y, s_);
  const std::size_t n = log_t_.size();
  if (y <= log_t_.back()) {
    const auto it = std::upper_bound(log_t_.begin(), log_t_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - log_t_.begin());
    const double a = (y - log_t_[i - 1]) / (log_t_[i] - log_t_[i - 1]);
    return w_[i - 1] + a * (w_[i] - w_[i - 1]);
  }
  // power law continuation of the last segment in (t, omega) log-log coordinates
  const double w1 = w_[n - 1];
  const double w0 = w_[n - 2];
  if (w0 <= 0.0) {
    // last segment starts at zero: continue linearly in log t
    const double slope = (w1 - w0) / (log_t_[n - 1] - log_t_[n - 2]);
    return w1 + slope * (y - log_t_[n - 1]);
  }
  const double beta = (std::log(w1) - std::log(w0)) / (log_t_[n - 1] - log_t_[n - 2]);
  return w1 * std::exp(beta * (y - log_t_[n - 1]));
}

double WeightFunction::operator()(double t) const {
  if (t <= 1.0) return 0.0;
  return phi(std::log(t));
}

std::string WeightFunction::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::OmegaS) os << "omega_s(s=" << s_ << ")";
  else os << "table(" << log_t_.size() - 1 << " points)";
  return os.str();
}

bool WeightFunction::phi_convex_on_grid() const {
  const double hi = kind_ == Kind::OmegaS ? 20.0 : 2.0 * log_t_.back();
  const int n = 400;
  const double h = hi / n;
  for (int i = 1; i < n; ++i) {
    const double a = phi((i - 1) * h);
    const double b = phi(i * h);
    const double c = phi((i + 1) * h);
    if (a - 2 * b + c < -1e-9 * std::max(1.0, std::abs(b))) return false;
  }
  return true;
}

double young_conjugate(const WeightFunction& w, double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "young_conjugate needs x >= 0");
  if (x == 0.0) return 0.0;
  double y_hi = 1.0;
  // left secant slope bounds phi' from below at y_hi; once it reaches x the max lies left
  while ((w.phi(y_hi) - w.phi(0.5 * y_hi)) / (0.5 * y_hi) < x) {
    y_hi *= 2.0;
    if (y_hi > 1e12) throw Error(ErrorCode::Unbounded, "sup x*y - phi(y) diverges");
  }
  auto g = [&](double y) { return x * y - w.phi(y); };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = y_hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 300 && (b - a) > 1e-13 * std::max(1.0, b); ++it) {
    if (gc >= gd) {
      b = d; d = c; gd = gc;
      c = b - invphi * (b - a);
      gc = g(c);
    } else {
      a = c; c = d; gc = gd;
      d = a + invphi * (b - a);
      gd = g(d);
    }
  }
  return std::max({0.0, gc, gd, g(0.5 * (a + b))});
}

// ---------------------------------------------------------------------------
// WeightMatrix

int WeightMatrix::K() const {
  int k = rows.empty() ? 0 : rows.front().K();
  for (const auto& r : rows) k = std::min(k, r.K());
  return k;
}

std::optional<std::size_t> WeightMatrix::index_of(double param) const {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (std::abs(params[i] - param) <= 1e-12 * std::max(1.0, std::abs(param))) return i;
  return std::nullopt;
}

WeightMatrix WeightMatrix::assemble(std::vector<double> params, std::vector<WeightSequence> rows,
                                   std::string origin) {
  if (params.size() != rows.size() || rows.empty())
    throw Error(ErrorCode::InvalidArgument, "matrix needs one param per row");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(params[i] > 0)) throw Error(ErrorCode::InvalidArgument, "matrix params must be positive");
    if (i > 0 && !(params[i] > params[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "matrix params must increase");
  }
  WeightMatrix m;
  m.params = std::move(params);
  m.rows = std::move(rows);
  m.origin = std::move(origin);
  const int K = m.K();
  for (std::size_t i = 1; i < m.rows.size(); ++i) {
    const auto& lo = m.rows[i - 1];
    const auto& hi = m.rows[i];
    for (int k = 1; k <= K; ++k) {
      const double tm = 1e-9 * std::max(1.0, std::abs(hi.log_M(k)));
      const double tq = 1e-9 * std::max(1.0, std::abs(hi.log_mu(k)));
      if (lo.log_M(k) > hi.log_M(k) + tm || lo.log_mu(k) > hi.log_mu(k) + tq)
        throw Error(ErrorCode::InvalidArgument,
                    "rows " + std::to_string(i - 1) + "," + std::to_string(i) +
                        " not ordered at k=" + std::to_string(k));
    }
  }
  return m;
}

std::vector<double> default_param_grid() {
  std::vector<double> g;
  for (int j = -3; j <= 6; ++j) g.push_back(std::ldexp(1.0, j));
  return g;
}

WeightSequence omega_s_row(double s, double rho, int K) {
  if (!(s > 1.0) || !(rho > 0)) throw Error(ErrorCode::InvalidArgument, "omega_s row needs s > 1, rho > 0");
  const double r = s / (s - 1.0);
  const double C = (s - 1.0) * std::pow(s, -r) * std::pow(rho, r - 1.0);
  std::vector<double> lM(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) lM[static_cast<std::size_t>(k)] = C * std::pow(double(k), r);
  return WeightSequence::from_log_values(std::move(lM), {"omega_s", {{"s", s}, {"rho", rho}}});
}

WeightMatrix associated_matrix(const WeightFunction& w, const std::vector<double>& params, int K) {
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
  std::vector<WeightSequence> rows;
  double dev = 0.0;
  for (double x : params) {
    if (!(x > 0)) throw Error(ErrorCode::InvalidArgument, "params must be positive");
    if (w.is_omega_s()) {
      rows.push_back(omega_s_row(w.s(), x, K));
      for (int k = 1; k <= K && x * k <= 1e6; k *= 2) {
        const double closed = rows.back().log_M(k);
        const double numeric = young_conjugate(w, x * k) / x;
        dev = std::max(dev, std::abs(numeric - closed) / std::max(closed, 1e-300));
      }
      continue;
    }
    std::vector<double> lM(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 1; k <= K; ++k) lM[static_cast<std::size_t>(k)] = young_conjugate(w, x * k) / x;
    // repair roundoff-level convexity defects from the numerical conjugate
    std::vector<double> lmu(lM.size(), 0.0);
    for (std::size_t k = 1; k < lM.size(); ++k) {
      lmu[k] = lM[k] - lM[k - 1];
      if (k >= 2 && lmu[k] < lmu[k - 1]) {
        if (lmu[k - 1] - lmu[k] > 1e-8 * std::max(1.0, std::abs(lmu[k - 1])))
          throw Error(ErrorCode::NonLogConvex, "numerical conjugate not convex at k=" + std::to_string(k));
        lmu[k] = lmu[k - 1];
      }
    }
    rows.push_back(WeightSequence::from_log_quotients(std::move(lmu), {"table_omega", {{"x", x}}}));
  }
  WeightMatrix m = WeightMatrix::assemble(params, std::move(rows), "associated:" + w.describe());
  m.closed_form_deviation = dev;
  return m;
}

// ---------------------------------------------------------------------------
// Admissibility

namespace {

CheckReport judge_lr(const std::vector<double>& lr, int K, const JudgeOptions& opts) {
  std::vector<int> idx(lr.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i) + 1;
  return judge_bounded(std::span<const double>(lr), std::span<const int>(idx), K, opts);
}

template <class Row>
std::optional<std::pair<std::size_t, double>> first_witness(const WeightMatrix& N, Row lr_for,
                                                            const JudgeOptions& opts) {
  for (std::size_t j = 0; j < N.size(); ++j) {
    const auto rep = judge_lr(lr_for(N.row(j)), N.K(), opts);
    if (rep.holds()) return std::make_pair(j, *rep.witness_constant);
  }
  return std::nullopt;
}

}  // namespace

// Existential condition over rows: the witness may sit beyond the sampled
// params for a contiguous block of top rows, provided lower rows are witnessed.
CheckReport combine_row_witnesses(const std::vector<std::optional<std::pair<std::size_t, double>>>& w,
                                  std::vector<bool>& saturated, int K) {
  CheckReport rep;
  rep.prefix_K = K;
  std::size_t first_missing = w.size();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!w[i]) { first_missing = i; break; }
  bool top_block = first_missing > 0;
  for (std::size_t i = first_missing; i < w.size(); ++i) top_block = top_block && !w[i];
  if (first_missing < w.size() && !top_block) {
    rep.verdict = Verdict::NotWitnessedInSample;
    rep.note = "no witnessing row for row " + std::to_string(first_missing);
    return rep;
  }
  double c = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i]) c = std::max(c, w[i]->second);
    else saturated[i] = true;
  }
  rep.verdict = Verdict::HoldsUpToK;
  rep.witness_constant = c;
  if (first_missing < w.size())
    rep.note = std::to_string(w.size() - first_missing) + " top row(s) saturated: witness beyond sampled params";
  return rep;
}

std::optional<std::pair<std::size_t, double>> find_cover_row(const WeightMatrix& N, std::size_t i,
                                                             const JudgeOptions& opts) {
  const int K = N.K();
  const auto& Ni = N.row(i);
  return first_witness(
      N,
      [&](const WeightSequence& Nd) {
        std::vector<double> lr;
        for (int k = 1; k <= K; ++k) lr.push_back(Ni.log_mu(k) - Nd.log_M(k) / k);
        return lr;
      },
      opts);
}

std::optional<std::pair<std::size_t, double>> find_doubling_row(const WeightMatrix& N, std::size_t i,
                                                                const JudgeOptions& opts) {
  const int K = N.K();
  const auto& Ni = N.row(i);
  return first_witness(
      N,
      [&](const WeightSequence& Nd) {
        std::vector<double> lr;
        for (int k = 1; 2 * k <= K; ++k) lr.push_back(Ni.log_mu(2 * k) - Nd.log_mu(k));
        return lr;
      },
      opts);
}

bool AdmissibilityReport::admissible_in_sample() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const CheckReport& r) { return r.holds(); });
}

AdmissibilityReport check_admissible_matrix(const WeightMatrix& N, const JudgeOptions& opts) {
  AdmissibilityReport rep;
  const int K = N.K();
  const std::size_t n = N.size();
  for (auto& c : rep.conditions) c.prefix_K = K;

  {  // (1) pairwise quotient comparability
    double c = 1.0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto a = check_quotient_below(N.row(i), N.row(j), opts);
        if (!a.holds()) a = check_quotient_below(N.row(j), N.row(i), opts);
        if (!a.holds()) {
          ok = false;
          rep.conditions[0] = a;
          rep.conditions[0].note = "rows " + std::to_string(i) + "," + std::to_string(j) + " incomparable";
          break;
        }
        c = std::max(c, *a.witness_constant);
      }
    }
    if (ok) {
      rep.conditions[0].verdict = Verdict::HoldsUpToK;
      rep.conditions[0].witness_constant = c;
    }
  }

  auto fold_rows = [K](const std::vector<CheckReport>& per_row) {
    CheckReport r;
    r.prefix_K = K;
    r.verdict = Verdict::HoldsUpToK;
    double c = 0.0;
    for (std::size_t i = 0; i < per_row.size(); ++i) {
      const auto& p = per_row[i];
      if (p.fails()) {
        r = p;
        r.note = "row " + std::to_string(i) + ": " + p.note;
        return r;
      }
      if (!p.holds()) r.verdict = Verdict::Inconclusive;
      if (p.witness_constant) c = std::max(c, *p.witness_constant);
    }
    if (r.holds()) r.witness_constant = c;
    return r;
  };

  for (std::size_t i = 0; i < n; ++i) {
    rep.nonquasianalytic.push_back(check_nonquasianalytic(N.row(i)));
    rep.quotient_growth.push_back(check_quotient_growth(N.row(i), opts));
  }
  rep.conditions[1] = fold_rows(rep.nonquasianalytic);
  rep.conditions[2] = fold_rows(rep.quotient_growth);

  std::vector<std::optional<std::pair<std::size_t, double>>> cov(n);
  std::vector<std::optional<std::pair<std::size_t, double>>> dbl(n);
  for (std::size_t i = 0; i < n; ++i) {
    cov[i] = find_cover_row(N, i, opts);
    dbl[i] = find_doubling_row(N, i, opts);
    rep.cover_row.push_back(cov[i] ? std::optional(cov[i]->first) : std::nullopt);
    rep.cover_constant.push_back(cov[i] ? std::optional(cov[i]->second) : std::nullopt);
    rep.doubling_row.push_back(dbl[i] ? std::optional(dbl[i]->first) : std::nullopt);
    rep.doubling_constant.push_back(dbl[i] ? std::optional(dbl[i]->second) : std::nullopt);
  }
  rep.saturated.assign(n, false);
  std::vector<bool> sat4(n, false);
  std::vector<bool> sat5(n, false);
  rep.conditions[3] = combine_row_witnesses(cov, sat4, K);
  rep.conditions[4] = combine_row_witnesses(dbl, sat5, K);
  for (std::size_t i = 0; i < n; ++i) rep.saturated[i] = sat4[i] || sat5[i];
  return rep;
}

// ---------------------------------------------------------------------------
// Integral condition

OmegaIntegralReport check_omega_nonquasianalytic(const WeightFunction& w) {
  OmegaIntegralReport rep;
  rep.integral.prefix_K = 0;
  rep.shifted_bound.prefix_K = 0;

  // int_1^T t^-2 omega(t) dt = int_0^{log T} e^-u phi(u) du
  auto integrand = [&w](double u) {
    const double p = w.phi(u);
    return p > 0 ? std::exp(std::log(p) - u) : 0.0;
  };
  double total = 0.0;
  double last_inc = INFINITY;
  double U = 8.0;
  total = adaptive_simpson(integrand, 0.0, U, 1e-12);
  bool converged = false;
  for (; U < 512.0; U *= 2.0) {
    last_inc = adaptive_simpson(integrand, U, 2.0 * U, 1e-12);
    total += last_inc;
    if (std::abs(last_inc) < 1e-8) {
      converged = true;
      break;
    }
  }
  rep.value = total;
  std::ostringstream note;
  note << "int_1^T t^-2 omega = " << total << " at log T = " << (converged ? 2 * U : U) << ", last increment " << last_inc;
  rep.integral.note = note.str();
  if (converged) {
    rep.integral.verdict = Verdict::HoldsUpToK;
    rep.integral.witness_constant = total;
  } else {
    rep.integral.verdict = last_inc > 1e-3 ? Verdict::Fails : Verdict::Inconclusive;
    if (rep.integral.fails()) rep.integral.counterexample_index = static_cast<int>(U);
    rep.shifted_bound.verdict = rep.integral.verdict;
    rep.shifted_bound.note = "integral does not converge";
    if (rep.shifted_bound.fails()) rep.shifted_bound.counterexample_index = 0;
    return rep;
  }

  // J(t) = int_1^inf y^-2 omega(t y) dy = int_0^inf e^-v phi(v + log t) dv
  const int G = 61;
  std::vector<double> J(G);
  std::vector<double> om(G);
  for (int g = 0; g < G; ++g) {
    const double lt = std::log(1e6) * g / (G - 1);
    auto f = [&](double v) {
      const double p = w.phi(v + lt);
      return p > 0 ? std::exp(std::log(p) - v) : 0.0;
    };
    double acc = adaptive_simpson(f, 0.0, 16.0, 1e-12);
    for (double V = 16.0; V < 2048.0; V *= 2.0) {
      const double inc = adaptive_simpson(f, V, 2.0 * V, 1e-12);
      acc += inc;
      if (std::abs(inc) < 1e-10 * std::max(1.0, acc)) break;
    }
    J[static_cast<std::size_t>(g)] = acc;
    om[static_cast<std::size_t>(g)] = w.phi(lt);
  }
  std::optional<double> bestA;
  std::optional<double> bestB;
  std::vector<double> bestRatios;
  std::vector<double> Bgrid{0.0};
  for (int j = -4; j <= 20; ++j) Bgrid.push_back(std::ldexp(1.0, j));
  for (double B : Bgrid) {
    double A = 0.0;
    bool ok = true;
    std::vector<double> ratios;
    for (int g = 0; g < G; ++g) {
      const double Jg = J[static_cast<std::size_t>(g)];
      const double wg = om[static_cast<std::size_t>(g)];
      if (wg <= 0) {
        if (Jg > B) ok = false;
        continue;
      }
      const double a = std::max(0.0, (Jg - B) / wg);
      A = std::max(A, a);
      ratios.push_back(std::log1p(a));
    }
    if (!ok) continue;
    A = std::max(A, 1e-12);
    if (!bestA || A + B < *bestA + *bestB) {
      bestA = A;
      bestB = B;
      bestRatios = ratios;
    }
  }
  if (bestA) {
    rep.shifted_bound = judge_lr(bestRatios, 0, {});
    if (rep.shifted_bound.holds()) {
      rep.A = bestA;
      rep.B = bestB;
      rep.shifted_bound.witness_constant = *bestA;
      std::ostringstream n2;
      n2 << "A = " << *bestA << ", B = " << *bestB << " on t in [1, 1e6]";
      rep.shifted_bound.note = n2.str();
    }
  } else {
    rep.shifted_bound.verdict = Verdict::Fails;
    rep.shifted_bound.counterexample_index = 0;
    rep.shifted_bound.note = "no B up to 2^20 covers t = 1";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Closed-form family checks

CheckReport check_tail_vs_quotient(const WeightSequence& W) {
  const TailSums ts = reciprocal_tail_sums(W);
  std::vector<double> lr;
  for (int k = 1; k <= W.K() / 2; ++k)
    lr.push_back(std::log(ts.suffix[static_cast<std::size_t>(k)]) - std::log(double(k)) + W.log_mu(k));
  CheckReport rep = judge_lr(lr, W.K(), {});
  std::ostringstream os;
  os << "tail bound beyond K: " << ts.tail_bound;
  rep.note = os.str();
  return rep;
}

CheckReport check_next_quotient_root(double s, double rho, double c, int K) {
  const WeightSequence a = omega_s_row(s, rho, K + 1);
  const WeightSequence b = omega_s_row(s, c * rho, K);
  CheckReport rep;
  rep.prefix_K = K;
  double worst = -INFINITY;
  for (int k = 1; k <= K; ++k) {
    const double gap = a.log_mu(k + 1) - b.log_M(k) / k;
    worst = std::max(worst, gap);
    if (gap > 1e-12 * std::max(1.0, std::abs(a.log_mu(k + 1)))) {
      rep.verdict = Verdict::Fails;
      rep.counterexample_index = k;
      return rep;
    }
  }
  rep.verdict = Verdict::HoldsUpToK;
  rep.witness_constant = std::exp(std::min(worst, 0.0));
  return rep;
}

bool check_power_difference_bounds(double r, int K) {
  for (int k = 1; k <= K; ++k) {
    const double kk = k;
    const double d = std::pow(kk + 1, r) - std::pow(kk, r);
    const double tol = 1e-12 * std::max(1.0, d);
    if (r * std::pow(kk, r - 1) > d + tol || d > r * std::pow(kk + 1, r - 1) + tol) return false;
  }
  return true;
}

bool check_quotient_doubling_pair(const WeightSequence& Wx, const WeightSequence& W4x) {
  const int K = std::min(Wx.K(), W4x.K());
  for (int k = 2; 2 * k <= K; ++k)
    if (Wx.log_mu(2 * k) > W4x.log_mu(k) + 1e-12 * std::max(1.0, W4x.log_mu(k))) return false;
  return true;
}

std::optional<double> find_scaling_row(const WeightMatrix& W, std::size_t i, double rho,
                                       const JudgeOptions& opts) {
  const int K = W.K();
  for (std::size_t j = i; j < W.size(); ++j) {
    const double H = W.params[j] / W.params[i];
    if (H > 64.0) break;
    std::vector<double> lr;
    for (int k = 1; k <= K; ++k) lr.push_back(k * std::log(rho) + W.row(i).log_M(k) - W.row(j).log_M(k));
    if (judge_lr(lr, K, opts).holds()) return H;
  }
  return std::nullopt;
}

}  // namespace ultrajet
