// ultrajet: sequence analysis, descendants, extension decisions and jet extension.
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ultrajet/error.hpp"
#include "ultrajet/io.hpp"

using namespace ultrajet;
using io::json;

namespace {

enum Exit { kOk = 0, kFails = 1, kUsage = 2, kInternal = 3 };

struct RunConfig {
  std::string out = "ultrajet_out";
  std::optional<int> K;
  std::string spec;
  std::string matrix;
  std::string jet;
  std::optional<double> L;
  double d_min = 1e-6;
  int K_conv = 12;
  int p_eval = 8;
  int probes = 400;
  unsigned seed = 12345;
  std::size_t base_row = 0;
  double s = 2.0;
  std::vector<double> params;
};

std::optional<int> prefix_K(const RunConfig& c) {
  if (c.K) return c.K;
  if (const char* env = std::getenv("ULTRAJET_K")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "ULTRAJET_K is not an integer");
    }
  }
  return std::nullopt;
}

void emit(const RunConfig& c, const std::string& name, const std::string& content) {
  io::write_atomic(c.out + "/" + name, content);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_analyze(const RunConfig& c) {
  const WeightSequence M = io::sequence_from_json(io::read_json(c.spec), prefix_K(c));
  const ModerateGrowthReport mg = check_moderate_growth(M);
  json rep = {{"sequence", M.tag().family},
              {"K", M.K()},
              {"moderate_growth", io::to_json(mg)},
              {"almost_concave", io::to_json(check_almost_concave(M))},
              {"nonquasianalytic", io::to_json(check_nonquasianalytic(M))}};
  try {
    rep["strong_tail"] = io::to_json(check_quotient_growth(M));
  } catch (const Error& e) {
    rep["strong_tail"] = std::string(to_string(e.code()));
  }
  emit(c, "analyze.json", dump(rep));
  emit(c, "sequence.csv", io::sequence_csv(M));
  emit(c, "associated.csv", io::associated_csv(M));
  std::cout << "moderate growth: " << to_string(mg.summary.verdict) << (mg.coherent ? "" : " (incoherent)") << "\n";
  if (!mg.coherent) return kInternal;
  return mg.summary.fails() ? kFails : kOk;
}

int cmd_descend(const RunConfig& c) {
  const WeightSequence N = io::sequence_from_json(io::read_json(c.spec), prefix_K(c));
  const Descendant D = descend(N);
  const DescendantReport r = check_descendant(N, D);
  emit(c, "descendant.csv", descendant_csv(N, D));
  emit(c, "descendant_checks.json", dump(io::to_json(r)));
  bool fails = false;
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    std::cout << "item " << i + 1 << ": " << to_string(r.items[i].verdict) << "\n";
    fails = fails || r.items[i].fails();
  }
  return fails ? kFails : kOk;
}

int cmd_decide(const RunConfig& c) {
  const io::MatrixSpec m = io::matrix_from_json(io::read_json(c.matrix), prefix_K(c));
  json out;
  int code = kOk;
  try {
    const DecisionReport d = decide_extension_property(*m.matrix, m.omega);
    out = io::to_json(d);
    std::cout << "answer: " << to_string(d.answer) << "\n";
    if (d.answer != Answer::Yes) code = kFails;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotAdmissibleInSample) throw;
    out = {{"answer", "WARN"}, {"note", e.what()}, {"admissibility", io::to_json(check_admissible_matrix(*m.matrix))}};
    std::cout << "warning: " << e.what() << "\n";
    code = kFails;
  }
  const TailFormsReport l = check_tail_forms(*m.matrix);
  out["tail_forms"] = io::to_json(l);
  emit(c, "decision.json", dump(out));
  if (l.applicable() && !l.agree()) {
    std::cout << "phi and quotient forms disagree\n";
    return kInternal;
  }
  return code;
}

int cmd_matrix(const RunConfig& c) {
  WeightFunction w = WeightFunction::omega_s(c.s);
  if (!c.spec.empty()) w = io::weight_function_from_json(io::read_json(c.spec));
  const auto params = c.params.empty() ? default_param_grid() : c.params;
  const WeightMatrix N = associated_matrix(w, params, prefix_K(c).value_or(512));
  const AdmissibilityReport a = check_admissible_matrix(N);
  emit(c, "matrix.csv", io::matrix_csv(N));
  emit(c, "admissibility.json", dump(io::to_json(a)));
  std::cout << w.describe() << ": admissible in sample = " << (a.admissible_in_sample() ? "yes" : "no") << "\n";
  return a.admissible_in_sample() ? kOk : kFails;
}

int cmd_extend(const RunConfig& c) {
  const Jet F = io::jet_from_json(io::read_json(c.jet));
  const io::MatrixSpec m = io::matrix_from_json(io::read_json(c.matrix), prefix_K(c));
  ExtendConfig cfg;
  cfg.base_row = c.base_row;
  cfg.L = c.L;
  cfg.d_min = c.d_min;
  cfg.conv_depth = c.K_conv;
  cfg.p_max_eval = c.p_eval;
  cfg.probes = c.probes;
  cfg.seed = c.seed;
  ExtensionResult r;
  try {
    r = extend_jet(F, m.matrix, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::JetNotInClass) throw;
    emit(c, "extension.json", dump(json{{"error", std::string(to_string(e.code()))}, {"note", e.what()}}));
    std::cout << e.what() << "\n";
    return kFails;
  }
  const Extension& f = *r.f;
  emit(c, "extension.json", dump(io::to_json(r)));

  // curve data and probe report
  const CompactSet1D& E = F.set();
  std::vector<double> xs;
  std::string curve = "x,d,f,f1,f2\n";
  for (int i = 0; i <= 2000; ++i) {
    const double x = E.hull_lo() - 1.25 + (E.hull_hi() - E.hull_lo() + 2.5) * i / 2000.0;
    const auto d = f.derivs(x, 2);
    std::ostringstream row;
    row.precision(17);
    row << x << ',' << nearest_point(E, x).d << ',' << d[0] << ',' << d[1] << ',' << d[2] << '\n';
    curve += row.str();
    if (i % 20 == 10) xs.push_back(x);
  }
  emit(c, "curve.csv", curve);
  const auto& v = r.verification;
  const WeightSequence& row = m.matrix->row(f.chain().Nddot_p);
  emit(c, "probes.csv", io::probe_csv(f, xs, c.p_eval, v.growth_C, v.growth_rho, row));
  emit(c, "plot_extension.gp",
       "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\n"
       "plot 'curve.csv' using 1:3 with lines title 'f', '' using 1:4 with lines title \"f'\"\n");
  std::cout << "L = " << f.L() << ", epsilon = " << f.epsilon() << ", growth C' = " << v.growth_C
            << ", Taylor estimate violations = " << v.taylor_jumps.violations_derivative + v.taylor_jumps.violations_remainder << "\n";
  return v.taylor_jumps.ok() && v.ladder_decreasing ? kOk : kFails;
}

// quick end-to-end smoke run
int cmd_selftest() {
  int bad = 0;
  auto line = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++bad;
  };
  const WeightSequence g2 = make_sequence(family::Gevrey{2.0}, 128);
  line("gevrey(2) moderate growth", check_moderate_growth(g2).summary.holds());
  line("qgevrey(2) fails moderate growth", check_moderate_growth(make_sequence(family::QGevrey{2.0}, 128)).summary.fails());
  const Descendant D = descend(g2);
  const WeightSequence back = recover_predecessor(D.sigma);
  const Descendant D2 = descend(back, {.K_eff = D.K_eff, .tail_beyond_K = recovered_tail(back)});
  double worst = 0.0;
  for (int k = 1; k <= std::min(32, D.K_eff); ++k)
    worst = std::max(worst, std::abs(D2.sigma.log_mu(k) - D.sigma.log_mu(k)));
  line("descendant round trip", worst < 1e-6);
  auto Nm = std::make_shared<const WeightMatrix>(associated_matrix(WeightFunction::omega_s(2.0), default_param_grid(), 256));
  const CutoffFamily fam(Nm->row(3), Nm->row(4));
  line("cutoff properties", verify_cutoff(fam, 1.0, 2.0, 6, 200).ok());
  const Jet F = sample_jet(analytic::Exp{}, CompactSet1D::make({0.0}, {}), 16);
  ExtendConfig cfg;
  cfg.probes = 100;
  const ExtensionResult r = extend_jet(F, Nm, cfg);
  line("exp extension matches the jet", r.verification.ladder_error.back() < 1e-3 && r.verification.taylor_jumps.ok());
  return bad ? kInternal : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weight-sequence calculus and constructive Whitney extension in one variable"};
  app.require_subcommand(1);
  RunConfig c;
  app.add_option("-o,--out", c.out, "output directory");
  app.add_option("-K,--K", c.K, "prefix length (overrides ULTRAJET_K and the spec)");

  auto* analyze = app.add_subcommand("analyze", "growth conditions and associated functions of a sequence");
  analyze->add_option("spec", c.spec, "sequence spec JSON")->required();
  auto* desc = app.add_subcommand("descend", "descendant sequence and its structural checks");
  desc->add_option("spec", c.spec, "sequence spec JSON")->required();
  auto* decide = app.add_subcommand("decide", "extension property of a weight matrix");
  decide->add_option("matrix", c.matrix, "matrix spec JSON")->required();
  auto* matrix = app.add_subcommand("matrix", "weight matrix generated from a weight function");
  matrix->add_option("--omega", c.spec, "weight function JSON (default omega_s)");
  matrix->add_option("--s", c.s, "exponent of omega_s");
  matrix->add_option("--params", c.params, "row parameters");
  auto* extend = app.add_subcommand("extend", "extend a Whitney jet");
  extend->add_option("jet", c.jet, "jet JSON")->required();
  extend->add_option("matrix", c.matrix, "matrix spec JSON")->required();
  extend->add_option("--L", c.L, "fix L instead of searching");
  extend->add_option("--d-min", c.d_min, "collar depth")->check(CLI::PositiveNumber);
  extend->add_option("--K-conv", c.K_conv, "box convolutions per cutoff")->check(CLI::PositiveNumber);
  extend->add_option("--p-eval", c.p_eval, "highest derivative order verified");
  extend->add_option("--probes", c.probes, "random probes")->check(CLI::PositiveNumber);
  extend->add_option("--seed", c.seed, "probe seed");
  extend->add_option("--base-row", c.base_row, "matrix row whose descendant is the jet class");
  auto* selftest = app.add_subcommand("selftest", "quick end-to-end check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    if (*analyze) return cmd_analyze(c);
    if (*desc) return cmd_descend(c);
    if (*decide) return cmd_decide(c);
    if (*matrix) return cmd_matrix(c);
    if (*extend) return cmd_extend(c);
    if (*selftest) return cmd_selftest();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
