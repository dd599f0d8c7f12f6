#pragma once

#include "netrisk/milp/solver.hpp"
#include "netrisk/network.hpp"
#include "netrisk/scenarios.hpp"

#include <vector>

namespace netrisk {

inline constexpr double kCornerTol = 1e-9;

/// Staircase region {z >= floor} minus a union of open lower cones,
/// represented by its minimal points.
struct CornerSet {
  Vector floor;
  std::vector<Vector> corners;

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(floor.size()); }
};

[[nodiscard]] CornerSet corner_init(const Vector& z_ideal);

/// Removes y - int(R^G_+) from the region. A corner strictly below y in
/// every coordinate is replaced by its G lifts (coordinate j raised to y_j);
/// the result is reduced to its minimal elements.
[[nodiscard]] CornerSet corner_remove_cone(const CornerSet& cs, const Vector& y, double tol = kCornerTol);

struct BensonStep {
  Vector v;
  double mu = 0.0;
  Vector y;
  long nodes = 0;
  double seconds = 0.0;
};

struct ApproximationPair {
  CornerSet outer;
  std::vector<Vector> inner_points;  // boundary points y^s; z_ub is kept apart
  double epsilon = 0.0;
  Vector z_ub;
  Vector z_ideal;
  double gamma = 0.0;
  std::vector<BensonStep> history;
  int iterations = 0;   // main-loop rounds
  int z2_count = 0;
  double ideal_seconds = 0.0;
  double total_seconds = 0.0;
  /// True when every corner below z_ub passed the stopping test at return.
  bool certified = false;
};

/// point > y strictly for some inner point y, or point > z_ub.
[[nodiscard]] bool inner_contains_interior(const ApproximationPair& pair, const Vector& point);

/// Corners of the outer set that are componentwise <= z_ub.
[[nodiscard]] std::vector<Vector> active_corners(const ApproximationPair& pair);

/// True when every active corner v has v + epsilon 1 in the interior of the
/// inner set.
[[nodiscard]] bool stopping_rule_holds(const ApproximationPair& pair);

struct ApproximateOptions {
  /// Solve the minimum-step problems of all eligible corners of a round in
  /// parallel before updating the sets.
  bool batch = false;
  int max_iterations = 100'000;
  unsigned threads = 0;  // batch mode; 0 means hardware concurrency
};

/// Inner and outer approximation of the risk set. Throws InfeasibleSpec when
/// gamma exceeds the total obligations and UpperBoundNotMember when a given
/// z_ub is not acceptable.
[[nodiscard]] ApproximationPair approximate(const FinancialNetwork& net, const ScenarioSet& scen,
                                            const Grouping& grouping, const RiskSpec& spec,
                                            const ApproximateOptions& options = {});

/// Default upper-bound point: the ideal point for gamma = 1^T pbar shifted by
/// 2 |pbar|_inf, raised where needed to a point that is always acceptable.
[[nodiscard]] Vector auto_upper_bound(const FinancialNetwork& net, const ScenarioSet& scen,
                                      const Grouping& grouping);

/// Smallest increase of step (tried in doubling increments) that makes
/// anchor + step 1 acceptable. Compensates the solver's feasibility tolerance.
[[nodiscard]] double certify_step(const FinancialNetwork& net, const ScenarioSet& scen,
                                  const Grouping& grouping, double gamma, const Vector& anchor, double mu);

}  // namespace netrisk
