#pragma once

#include "netrisk/milp/model.hpp"

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace netrisk::milp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

[[nodiscard]] std::string_view to_string(Status status) noexcept;

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> values;
  long nodes = 0;
  long simplex_iterations = 0;
  /// |best bound - incumbent| at termination.
  double gap = 0.0;

  [[nodiscard]] bool optimal() const noexcept { return status == Status::Optimal; }
};

struct Limits {
  long max_nodes = 20'000'000;
  long max_simplex_iterations = std::numeric_limits<long>::max();
  /// Open-node count above which node selection falls back to depth-first.
  std::size_t open_node_threshold = 1'000'000;
};

struct Tolerances {
  double primal = 1e-7;
  double integrality = 1e-6;
  double relative_gap = 1e-6;  // gap <= relative_gap * (1 + |objective|)
};

/// Seam for MILP engines; callers depend on this rather than a concrete solver.
class Backend {
 public:
  virtual ~Backend() = default;
  [[nodiscard]] virtual Solution solve(const Model& model, const Limits& limits) = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

/// Embedded LP-based branch and bound over binary variables: most-fractional
/// branching, best-bound node selection with deeper nodes first on ties, and
/// bound tightening from rows that have a single unfixed variable left.
/// Every incumbent is polished by re-solving the LP with its binaries fixed.
class BranchAndBound final : public Backend {
 public:
  explicit BranchAndBound(Tolerances tol = {}) : tol_(tol) {}

  [[nodiscard]] Solution solve(const Model& model, const Limits& limits) override;
  [[nodiscard]] std::string name() const override { return "embedded-bnb"; }

 private:
  Tolerances tol_;
};

/// Solves with the default embedded engine.
[[nodiscard]] Solution solve(const Model& model, const Limits& limits = {});

[[nodiscard]] std::shared_ptr<Backend> default_backend();

}  // namespace netrisk::milp
