#include <algorithm>
#include <cmath>
#include <sstream>

#include "ultrajet/error.hpp"
#include "ultrajet/extend.hpp"

namespace ultrajet {

namespace {

constexpr double kRadius = 0.25;  // r_i = d(x_i)/4
constexpr double kStep = 2.0 / 3.0;

// balls at distances D, qD, q^2 D, ... from endpoint e (direction +1 or -1) until
// their inner end reaches d_min
void ladder(std::vector<Ball>& out, double e, int dir, double D, double d_min) {
  while (true) {
    out.push_back({e + dir * D, kRadius * D, e, D});
    if ((1.0 - kRadius) * D <= d_min) break;
    D *= kStep;
  }
}

}  // namespace

std::vector<std::size_t> WhitneyCover1D::active(double x) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < balls.size(); ++i)
    if (std::abs(x - balls[i].x) < c * balls[i].r) idx.push_back(i);
  return idx;
}

bool WhitneyCover1D::covered(double x) const {
  return std::any_of(balls.begin(), balls.end(), [x](const Ball& B) { return std::abs(x - B.x) < B.r; });
}

WhitneyCover1D whitney_cover(const CompactSet1D& E, double d_min, double margin) {
  if (!(d_min > 0) || !(margin > 0)) throw Error(ErrorCode::InvalidArgument, "d_min and margin must be positive");
  WhitneyCover1D W;
  W.d_min = d_min;
  W.E = E;
  const auto comps = E.components();
  W.domain_lo = comps.front().first - margin;
  W.domain_hi = comps.back().second + margin;
  std::ostringstream note;

  ladder(W.balls, comps.front().first, -1, margin, d_min);
  ladder(W.balls, comps.back().second, +1, margin, d_min);
  for (std::size_t g = 0; g + 1 < comps.size(); ++g) {
    const double u = comps[g].second;
    const double v = comps[g + 1].first;
    const double len = v - u;
    const double mid = 0.5 * (u + v);
    if (len < 4.0 * d_min) {
      W.degenerate_gap = true;
      W.balls.push_back({mid, 0.25 * len, u, 0.5 * len});
      note << "gap (" << u << ", " << v << ") shorter than 4 d_min; ";
      continue;
    }
    W.balls.push_back({mid, len / 8.0, u, 0.5 * len});
    ladder(W.balls, u, +1, len / 3.0, d_min);
    ladder(W.balls, v, -1, len / 3.0, d_min);
  }
  std::sort(W.balls.begin(), W.balls.end(), [](const Ball& p, const Ball& q) { return p.x < q.x; });

  // measured comparability constants on the enlarged balls
  W.a = INFINITY;
  W.b = 0.0;
  for (const Ball& B : W.balls) {
    for (int j = 0; j <= 64; ++j) {
      const double x = B.x - W.c * B.r + 2.0 * W.c * B.r * j / 64.0;
      const double q = nearest_point(E, x).d / B.r;
      W.a = std::min(W.a, q);
      W.b = std::max(W.b, q);
    }
  }
  // overlap count of open enlarged balls by sweep, ends before starts at ties
  std::vector<std::pair<double, int>> ev;
  for (const Ball& B : W.balls) {
    ev.emplace_back(B.x - W.c * B.r, +1);
    ev.emplace_back(B.x + W.c * B.r, -1);
  }
  std::sort(ev.begin(), ev.end());
  int cur = 0;
  for (const auto& e : ev) W.n0 = std::max(W.n0, cur += e.second);

  // coverage of {d >= d_min} inside the working domain
  W.coverage_ok = true;
  const int probes = 2000;
  for (int i = 0; i <= probes; ++i) {
    const double x = W.domain_lo + (W.domain_hi - W.domain_lo) * i / probes;
    if (nearest_point(E, x).d >= d_min && !W.covered(x)) {
      W.coverage_ok = false;
      note << "uncovered probe " << x << "; ";
      break;
    }
  }
  note << W.balls.size() << " balls, a = " << W.a << ", b = " << W.b << ", n0 = " << W.n0;
  W.note = note.str();
  return W;
}

}  // namespace ultrajet
