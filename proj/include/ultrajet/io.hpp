#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "ultrajet/check_report.hpp"
#include "ultrajet/decide.hpp"
#include "ultrajet/descend.hpp"
#include "ultrajet/extend.hpp"
#include "ultrajet/jets.hpp"
#include "ultrajet/seqcalc.hpp"
#include "ultrajet/weightfunc.hpp"

namespace ultrajet::io {

using json = nlohmann::json;

[[nodiscard]] json parse(const std::string& text);  ///< PARSE_ERROR on malformed input
[[nodiscard]] json read_json(const std::string& path);
[[nodiscard]] std::string read_file(const std::string& path);
// temp file in the same directory, then rename
void write_atomic(const std::string& path, const std::string& content);

// {"family": ..., "params": {...}, "K": int}; K_override wins when given
[[nodiscard]] WeightSequence sequence_from_json(const json& j, std::optional<int> K_override = std::nullopt);
// {"kind": "omega_s", "s": real} or {"kind": "table", "points": [[t, w], ...]}
[[nodiscard]] WeightFunction weight_function_from_json(const json& j);

// {"weight_function": {...}, "params": [...], "K": int}, {"sequence": {...}}
// or {"rows": [seq specs], "params": [...]}
struct MatrixSpec {
  std::shared_ptr<const WeightMatrix> matrix;
  std::optional<WeightFunction> omega;
};
[[nodiscard]] MatrixSpec matrix_from_json(const json& j, std::optional<int> K_override = std::nullopt);

// {"points": [...], "order_cap": p, "values": [[...], ...]} or a sampled analytic function:
// {"analytic": "exp"|"sin"|{"polynomial": [...]}|{"rational": {"p": [...], "q": [...]}},
//  "points": [...], "intervals": [[a, b], ...], "order_cap": p}
[[nodiscard]] Jet jet_from_json(const json& j);
[[nodiscard]] json jet_to_json(const Jet& F);

[[nodiscard]] json to_json(const CheckReport& r);
[[nodiscard]] json to_json(const ModerateGrowthReport& r);
[[nodiscard]] json to_json(const MixedGrowthReport& r);
[[nodiscard]] json to_json(const DescendantReport& r);
[[nodiscard]] json to_json(const AdmissibilityReport& r);
[[nodiscard]] json to_json(const OmegaIntegralReport& r);
[[nodiscard]] json to_json(const ExtensionVerdict& v);
[[nodiscard]] json to_json(const TailFormsReport& r);
[[nodiscard]] json to_json(const DecisionReport& r);
[[nodiscard]] json to_json(const JetNormProfile& p);
[[nodiscard]] json to_json(const WhitneyCover1D& c);
[[nodiscard]] json to_json(const ExtensionResult& r);

// (k, logM, mu, m)
[[nodiscard]] std::string sequence_csv(const WeightSequence& M);
// t, h, Gamma, Sigma, omega on a log grid inside the trusted range
[[nodiscard]] std::string associated_csv(const WeightSequence& M, int points = 200);
// k, then one logM column per parameter row
[[nodiscard]] std::string matrix_csv(const WeightMatrix& N);
[[nodiscard]] std::string profile_csv(const JetNormProfile& p);
// piece, lo, hi, coefficients in powers of (x - lo)
[[nodiscard]] std::string spline_csv(const PiecewisePolynomial& f);
// x, d(x), k, f^(k)(x), bound, pass; the bound is the fitted growth bound
[[nodiscard]] std::string probe_csv(const Extension& f, const std::vector<double>& xs, int max_order,
                                    double C, double rho, const WeightSequence& row);

}  // namespace ultrajet::io
