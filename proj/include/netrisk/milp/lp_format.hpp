#pragma once

#include "netrisk/milp/model.hpp"

#include <string>

namespace netrisk::milp {

/// Writes the model in CPLEX LP interchange format (objective, Subject To,
/// Bounds, Binaries, End). Output is deterministic; numbers carry 17
/// significant digits so a reader recovers the exact doubles.
[[nodiscard]] std::string export_lp(const Model& model);

/// Name as written to the LP file (invalid characters replaced).
[[nodiscard]] std::string lp_name(const std::string& name, const std::string& fallback);

}  // namespace netrisk::milp
