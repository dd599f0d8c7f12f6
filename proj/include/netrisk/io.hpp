#pragma once

#include "netrisk/benson.hpp"
#include "netrisk/clearing.hpp"
#include "netrisk/network.hpp"
#include "netrisk/scalarize.hpp"
#include "netrisk/scenarios.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace netrisk::io {

using json = nlohmann::json;

/// Decimal text with `digits` significant digits.
[[nodiscard]] std::string fmt_num(double v, int digits = 12);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// Networks: { "n": int, "variant": "en" | {"rv": {"alpha": a, "beta": b}},
//             "liabilities": [[...]] }
[[nodiscard]] Variant variant_from_json(const json& j);
[[nodiscard]] json variant_to_json(const Variant& v);
[[nodiscard]] FinancialNetwork network_from_json(const json& j);
[[nodiscard]] json network_to_json(const FinancialNetwork& net);
[[nodiscard]] FinancialNetwork load_network(const std::filesystem::path& path);

// Scenarios: header "q,x1,...,xn" then one row per scenario.
[[nodiscard]] ScenarioSet scenarios_from_csv(const std::string& text);
[[nodiscard]] std::string scenarios_to_csv(const ScenarioSet& scen);
[[nodiscard]] ScenarioSet load_scenarios(const std::filesystem::path& path);

/// Cash-flow rows for clearing. Accepts a header "x1,...,xn" or a scenario
/// file (the q column is ignored).
[[nodiscard]] Matrix cash_flows_from_csv(const std::string& text);

// Grouping: {"sizes": [..]} or {"assignment": [..]} with 1-based groups.
[[nodiscard]] Grouping grouping_from_json(const json& j);
[[nodiscard]] json grouping_to_json(const Grouping& g);

// Generator: {"group_sizes", "q_con", "l_gr", "variant", "seed",
//   "cash_flow": {"gaussian": {"nu", "sigma", "rho"}}
//              | {"gamma_copula": {"kappa", "theta", "rho"}}}
[[nodiscard]] GeneratorConfig generator_from_json(const json& j);
[[nodiscard]] json generator_to_json(const GeneratorConfig& cfg);

// Risk spec: {"gamma_p", "epsilon", "z_ub": "auto" | [..]}
[[nodiscard]] RiskSpec spec_from_json(const json& j);
[[nodiscard]] json spec_to_json(const RiskSpec& spec);
/// "auto" or comma-separated numbers.
[[nodiscard]] std::optional<Vector> parse_z_ub(const std::string& text);
[[nodiscard]] Vector parse_vector(const std::string& text);

[[nodiscard]] json clearing_to_json(const ClearingResult& r);
[[nodiscard]] json scalarization_to_json(const ScalarizationProblem& prob, const ScalarizationResult& r);

/// Rows "kind,g1,...,gG" with kind inner or outer.
[[nodiscard]] std::string corners_csv(const ApproximationPair& pair);
/// Staircase polylines of both sets for G = 2: "set,order,g1,g2".
[[nodiscard]] std::string polyline_csv(const ApproximationPair& pair);
[[nodiscard]] json run_metadata(const ApproximationPair& pair);

[[nodiscard]] Vector vector_from_json(const json& j);
[[nodiscard]] Matrix matrix_from_json(const json& j);
[[nodiscard]] json to_json(const Vector& v);
[[nodiscard]] json to_json(const Matrix& m);

}  // namespace netrisk::io
