#include "ultrajet/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ultrajet/error.hpp"

namespace ultrajet::io {

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw Error(ErrorCode::Parse, std::string("missing number '") + key + "'");
  return j.at(key).get<double>();
}

std::vector<double> nums(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorCode::Parse, "expected a number");
    v.push_back(x.get<double>());
  }
  return v;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) { return parse(read_file(path)); }

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp);
    out << content;
    if (!out.flush()) throw Error(ErrorCode::Io, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::Io, "rename to " + path + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Specs

WeightSequence sequence_from_json(const json& j, std::optional<int> K_override) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw Error(ErrorCode::Parse, "sequence spec needs a 'family' string");
  const std::string fam = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  int K = K_override.value_or(j.value("K", 256));
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  FamilySpec spec;
  if (fam == "gevrey") spec = family::Gevrey{num(params, "s")};
  else if (fam == "qgevrey") spec = family::QGevrey{num(params, "q")};
  else if (fam == "powerlog") spec = family::PowerLog{num(params, "A"), num(params, "p")};
  else if (fam == "table") {
    if (!params.contains("values")) throw Error(ErrorCode::Parse, "table needs params.values");
    spec = family::Table{nums(params.at("values"))};
  } else throw Error(ErrorCode::Parse, "unknown family '" + fam + "'");
  return make_sequence(spec, K);
}

WeightFunction weight_function_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "omega_s") return WeightFunction::omega_s(num(j, "s"));
  if (kind == "table") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j.at("points")) {
      const auto v = nums(p);
      if (v.size() != 2) throw Error(ErrorCode::Parse, "table points are [t, w] pairs");
      pts.emplace_back(v[0], v[1]);
    }
    return WeightFunction::table(std::move(pts));
  }
  throw Error(ErrorCode::Parse, "unknown weight function kind '" + kind + "'");
}

MatrixSpec matrix_from_json(const json& j, std::optional<int> K_override) {
  MatrixSpec m;
  const int K = K_override.value_or(j.value("K", 512));
  if (j.contains("weight_function")) {
    m.omega = weight_function_from_json(j.at("weight_function"));
    const auto params = j.contains("params") ? nums(j.at("params")) : default_param_grid();
    m.matrix = std::make_shared<const WeightMatrix>(associated_matrix(*m.omega, params, K));
  } else if (j.contains("sequence")) {
    auto row = sequence_from_json(j.at("sequence"), K_override);
    m.matrix = std::make_shared<const WeightMatrix>(WeightMatrix::assemble({1.0}, {std::move(row)}, "singleton"));
  } else if (j.contains("rows")) {
    std::vector<WeightSequence> rows;
    for (const auto& r : j.at("rows")) rows.push_back(sequence_from_json(r, K_override));
    std::vector<double> params;
    if (j.contains("params")) params = nums(j.at("params"));
    else
      for (std::size_t i = 0; i < rows.size(); ++i) params.push_back(double(i + 1));
    m.matrix = std::make_shared<const WeightMatrix>(WeightMatrix::assemble(std::move(params), std::move(rows), "rows"));
  } else {
    throw Error(ErrorCode::Parse, "matrix spec needs 'weight_function', 'sequence' or 'rows'");
  }
  return m;
}

Jet jet_from_json(const json& j) {
  const int p = j.value("order_cap", 16);
  std::vector<double> points = j.contains("points") ? nums(j.at("points")) : std::vector<double>{};
  std::vector<std::pair<double, double>> intervals;
  if (j.contains("intervals"))
    for (const auto& iv : j.at("intervals")) {
      const auto v = nums(iv);
      if (v.size() != 2) throw Error(ErrorCode::Parse, "intervals are [lo, hi] pairs");
      intervals.emplace_back(v[0], v[1]);
    }
  const CompactSet1D E = CompactSet1D::make(points, intervals);
  if (j.contains("analytic")) {
    const json& a = j.at("analytic");
    AnalyticSpec f;
    if (a == "exp") f = analytic::Exp{};
    else if (a == "sin") f = analytic::Sin{};
    else if (a.is_object() && a.contains("polynomial")) f = analytic::Polynomial{nums(a.at("polynomial"))};
    else if (a.is_object() && a.contains("rational"))
      f = analytic::Rational{nums(a.at("rational").at("p")), nums(a.at("rational").at("q"))};
    else throw Error(ErrorCode::Parse, "unknown analytic generator");
    return sample_jet(f, E, p);
  }
  if (!intervals.empty()) throw Error(ErrorCode::Parse, "explicit jet values are supported on finite sets only");
  std::vector<std::vector<double>> values;
  for (const auto& row : j.at("values")) values.push_back(nums(row));
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != points) throw Error(ErrorCode::Parse, "jet points must be listed in increasing order");
  return Jet(E, p, points, std::move(values));
}

json jet_to_json(const Jet& F) {
  json v = json::array();
  for (std::size_t i = 0; i < F.size(); ++i) v.push_back(F.values(i));
  return {{"points", F.points()}, {"order_cap", F.p_max()}, {"values", v}};
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const CheckReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"witness_constant", opt(r.witness_constant)},
          {"counterexample_index", opt(r.counterexample_index)},
          {"prefix_K", r.prefix_K},
          {"note", r.note}};
}

json to_json(const ModerateGrowthReport& r) {
  json c = json::object();
  for (const auto& [k, v] : r.conditions) c[k] = to_json(v);
  return {{"conditions", c}, {"coherent", r.coherent}, {"summary", to_json(r.summary)}, {"diagnostics", r.diagnostics}};
}

json to_json(const MixedGrowthReport& r) {
  return {{"quotient_doubling", to_json(r.quotient_doubling)},
          {"h_square", to_json(r.h_square)},
          {"gamma_doubling", to_json(r.gamma_doubling)},
          {"product_bound", to_json(r.product_bound)},
          {"chain_consistent", r.chain_consistent}};
}

json to_json(const DescendantReport& r) {
  json j = json::object();
  for (std::size_t i = 0; i < r.items.size(); ++i) j["item_" + std::to_string(i + 1)] = to_json(r.items[i]);
  return j;
}

json to_json(const AdmissibilityReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) conds.push_back(to_json(c));
  json rows = json::array();
  for (std::size_t i = 0; i < r.nonquasianalytic.size(); ++i)
    rows.push_back({{"row", i},
                    {"nonquasianalytic", r.nonquasianalytic[i].verdict == Verdict::HoldsUpToK},
                    {"strong_tail", to_string(r.quotient_growth[i].verdict)},
                    {"cover_row", opt(r.cover_row[i])},
                    {"cover_constant", opt(r.cover_constant[i])},
                    {"doubling_row", opt(r.doubling_row[i])},
                    {"doubling_constant", opt(r.doubling_constant[i])},
                    {"saturated", bool(r.saturated[i])}});
  return {{"conditions", conds}, {"rows", rows}, {"admissible_in_sample", r.admissible_in_sample()}};
}

json to_json(const OmegaIntegralReport& r) {
  return {{"integral", to_json(r.integral)},
          {"shifted_bound", to_json(r.shifted_bound)},
          {"value", r.value},
          {"A", opt(r.A)},
          {"B", opt(r.B)}};
}

json to_json(const ExtensionVerdict& v) {
  json pairs = json::array();
  for (const auto& [a, b] : v.witnessing_pairs) pairs.push_back({a, b});
  return {{"condition_id", v.condition_id},
          {"verdict", to_json(v.verdict)},
          {"witnessing_pairs", pairs},
          {"constants", v.constants},
          {"p_used", v.p_used}};
}

json to_json(const TailFormsReport& r) {
  return {{"hypothesis", to_json(r.hypothesis)},
          {"phi_form", to_json(r.phi_form)},
          {"quotient_form", to_json(r.quotient_form)},
          {"applicable", r.applicable()},
          {"agree", r.agree()}};
}

json to_json(const DecisionReport& r) {
  json j = {{"answer", std::string(to_string(r.answer))},
            {"admissibility", to_json(r.admissibility)},
            {"characterization", to_json(r.characterization)},
            {"note", r.note}};
  j["all_x_exists_y"] = r.all_x_exists_y ? to_json(*r.all_x_exists_y) : json(nullptr);
  j["integral"] = r.integral ? to_json(*r.integral) : json(nullptr);
  return j;
}

json to_json(const JetNormProfile& p) {
  return {{"rho_grid", p.rho_grid},
          {"C_of_rho", p.C_of_rho},
          {"verdict_rho", opt(p.verdict_rho)},
          {"order_rho", p.order_rho},
          {"trend", to_json(p.trend)},
          {"not_in_class", p.not_in_class},
          {"sampled_intervals", p.sampled_intervals}};
}

json to_json(const WhitneyCover1D& c) {
  json balls = json::array();
  for (const Ball& b : c.balls) balls.push_back({{"x", b.x}, {"r", b.r}, {"xhat", b.xhat}, {"d", b.d}});
  return {{"a", c.a},         {"b", c.b},
          {"c", c.c},         {"n0", c.n0},
          {"d_min", c.d_min}, {"domain", {c.domain_lo, c.domain_hi}},
          {"degenerate_gap", c.degenerate_gap}, {"coverage_ok", c.coverage_ok},
          {"balls", balls}};
}

json to_json(const ExtensionResult& r) {
  const Extension& f = *r.f;
  const auto& v = r.verification;
  const RowChain& ch = f.chain();
  json chain = {{"N", ch.N},       {"Ndot", ch.Ndot},       {"Nddot", ch.Nddot}, {"partition_Ndot", ch.Ndot_p},
                {"partition_Nddot", ch.Nddot_p}, {"D", ch.D}, {"A_power", ch.A_power}};
  json ver = {{"ladder", v.ladder},
              {"ladder_error", v.ladder_error},
              {"ladder_decreasing", v.ladder_decreasing},
              {"growth_C", v.growth_C},
              {"growth_rho", v.growth_rho},
              {"growth_trend", to_json(v.growth_trend)},
              {"taylor_jumps", {{"probes", v.taylor_jumps.probes},
                           {"violations_derivative", v.taylor_jumps.violations_derivative},
                           {"violations_remainder", v.taylor_jumps.violations_remainder},
                           {"worst_log_ratio", v.taylor_jumps.worst_log_ratio}}},
              {"orders_checked", v.orders_checked}};
  return {{"constants", {{"L", f.L()}, {"epsilon", f.epsilon()}, {"C", f.C()}, {"rho", f.rho()}, {"D1", r.D1},
                         {"B1", f.partition().B1()}}},
          {"rows", chain},
          {"degrees", f.ball_degrees()},
          {"cover", to_json(f.partition().cover())},
          {"verification", ver},
          {"note", r.note}};
}

// ---------------------------------------------------------------------------
// CSV

std::string sequence_csv(const WeightSequence& M) {
  std::ostringstream os;
  os << "k,logM,mu,m\n";
  for (int k = 0; k <= M.K(); ++k)
    os << k << ',' << fmt(M.log_M(k)) << ',' << fmt(M.mu(k)) << ',' << fmt(std::exp(M.log_m(k))) << '\n';
  return os.str();
}

std::string associated_csv(const WeightSequence& M, int points) {
  std::ostringstream os;
  os << "t,h,Gamma,Sigma,omega\n";
  // t in [mu_1, mu_{K-1}] keeps every function inside the trusted range
  const double lo = M.log_mu(1);
  const double hi = M.log_mu(std::max(1, M.K() - 1));
  for (int i = 0; i < points; ++i) {
    const double lt = lo + (hi - lo) * i / std::max(1, points - 1);
    const HResult h = h_assoc_log(M, -lt);
    std::string gam = "";
    std::string sig = "";
    try { gam = std::to_string(gamma_count_log(M, -lt)); } catch (const Error&) {}
    try { sig = std::to_string(sigma_count_log(M, lt)); } catch (const Error&) {}
    os << fmt(std::exp(lt)) << ',' << fmt(h.value) << ',' << gam << ',' << sig << ',' << fmt(omega_assoc_log(M, lt)) << '\n';
  }
  return os.str();
}

std::string matrix_csv(const WeightMatrix& N) {
  std::ostringstream os;
  os << 'k';
  for (double p : N.params) os << ",logM_" << fmt(p);
  os << '\n';
  for (int k = 0; k <= N.K(); ++k) {
    os << k;
    for (std::size_t i = 0; i < N.size(); ++i) os << ',' << fmt(N.row(i).log_M(k));
    os << '\n';
  }
  return os.str();
}

std::string profile_csv(const JetNormProfile& p) {
  std::ostringstream os;
  os << "rho,C\n";
  for (std::size_t i = 0; i < p.rho_grid.size(); ++i) os << fmt(p.rho_grid[i]) << ',' << fmt(p.C_of_rho[i]) << '\n';
  return os.str();
}

std::string spline_csv(const PiecewisePolynomial& f) {
  std::ostringstream os;
  os << "piece,lo,hi,coefficients\n";
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    os << i << ',' << fmt(f.breakpoints()[i]) << ',' << fmt(f.breakpoints()[i + 1]);
    for (long double c : f.pieces()[i].coef()) os << ',' << fmt(static_cast<double>(c));
    os << '\n';
  }
  return os.str();
}

std::string probe_csv(const Extension& f, const std::vector<double>& xs, int max_order, double C, double rho,
                      const WeightSequence& row) {
  std::ostringstream os;
  os << "x,d,k,value,bound,pass\n";
  for (double x : xs) {
    const double d = nearest_point(f.jet().set(), x).d;
    const auto v = f.derivs(x, max_order);
    for (int k = 0; k <= max_order; ++k) {
      const double bound = C * std::pow(rho, k) * std::exp(row.log_M(k));
      os << fmt(x) << ',' << fmt(d) << ',' << k << ',' << fmt(v[static_cast<std::size_t>(k)]) << ',' << fmt(bound)
         << ',' << (std::abs(v[static_cast<std::size_t>(k)]) <= bound * (1 + 1e-12) ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

}  // namespace ultrajet::io
