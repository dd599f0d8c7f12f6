#pragma once

#include "netrisk/milp/model.hpp"
#include "netrisk/milp/solver.hpp"
#include "netrisk/network.hpp"
#include "netrisk/scenarios.hpp"

#include <optional>
#include <vector>

namespace netrisk {

enum class ScalarizationKind { WeightedSum, MinStep };

/// Constants behind a scalarization model. big_m is 0 for Rogers-Veraart
/// models, which need none.
struct BoundsRecord {
  double big_m = 0.0;
  double lower = 0.0;  // box of every z / mu variable
  double upper = 0.0;
  double norm_x = 0.0;
  double norm_pbar = 0.0;
  double norm_v = 0.0;
};

/// Scenario-expanded MILP. Variables: z_0..z_{G-1} (weighted sum) or a single
/// mu (min step), then for each scenario k the payments p_k_* followed by the
/// default indicators s_k_*.
struct ScalarizationProblem {
  ScalarizationKind kind = ScalarizationKind::WeightedSum;
  Vector weights;  // weighted sum only
  Vector anchor;   // min step only
  double gamma = 0.0;
  ScenarioSet scenarios;  // after duplicate collapsing
  int n = 0;
  int groups = 0;
  milp::Model model;
  BoundsRecord bounds;

  [[nodiscard]] int num_capital() const noexcept { return kind == ScalarizationKind::MinStep ? 1 : groups; }
  [[nodiscard]] int p_index(int k, int i) const noexcept { return num_capital() + 2 * n * k + i; }
  [[nodiscard]] int s_index(int k, int i) const noexcept { return num_capital() + 2 * n * k + n + i; }
};

/// General nonnegative weights are accepted but only unit vectors are used
/// by the approximation algorithm.
[[nodiscard]] ScalarizationProblem build_z1(const FinancialNetwork& net, const ScenarioSet& scen,
                                            const Grouping& grouping, double gamma, const Vector& weights);
[[nodiscard]] ScalarizationProblem build_z1_en(const FinancialNetwork& net, const ScenarioSet& scen,
                                               const Grouping& grouping, double gamma, int group);
[[nodiscard]] ScalarizationProblem build_z1_rv(const FinancialNetwork& net, const ScenarioSet& scen,
                                               const Grouping& grouping, double gamma, int group);
[[nodiscard]] ScalarizationProblem build_z2_en(const FinancialNetwork& net, const ScenarioSet& scen,
                                               const Grouping& grouping, double gamma, const Vector& anchor);
[[nodiscard]] ScalarizationProblem build_z2_rv(const FinancialNetwork& net, const ScenarioSet& scen,
                                               const Grouping& grouping, double gamma, const Vector& anchor);

/// Variant dispatch; gamma taken from the risk specification.
[[nodiscard]] ScalarizationProblem build_z1(const FinancialNetwork& net, const ScenarioSet& scen,
                                            const Grouping& grouping, const RiskSpec& spec, int group);
[[nodiscard]] ScalarizationProblem build_z2(const FinancialNetwork& net, const ScenarioSet& scen,
                                            const Grouping& grouping, const RiskSpec& spec, const Vector& anchor);
[[nodiscard]] ScalarizationProblem build_z1(const FinancialNetwork& net, const ScenarioSet& scen,
                                            const Grouping& grouping, double gamma, int group);
[[nodiscard]] ScalarizationProblem build_z2(const FinancialNetwork& net, const ScenarioSet& scen,
                                            const Grouping& grouping, double gamma, const Vector& anchor);

struct ScalarizationResult {
  milp::Status status = milp::Status::Infeasible;
  double value = 0.0;
  Vector z;          // weighted sum: optimal z; min step: anchor + mu 1
  double mu = 0.0;   // min step only
  Matrix p;          // K x n, rows follow the collapsed scenarios
  Matrix s;
  long nodes = 0;
  double seconds = 0.0;

  [[nodiscard]] bool optimal() const noexcept { return status == milp::Status::Optimal; }
};

/// Infeasible comes back as a status. An optimal value outside the
/// variable box throws SolverFailure.
[[nodiscard]] ScalarizationResult solve_scalarization(const ScalarizationProblem& prob,
                                                      milp::Backend* backend = nullptr,
                                                      const milp::Limits& limits = {});

/// Ideal point: the G unit-weight scalarizations, solved concurrently.
/// Returns nullopt when they are infeasible.
[[nodiscard]] std::optional<Vector> ideal_point(const FinancialNetwork& net, const ScenarioSet& scen,
                                                const Grouping& grouping, double gamma);

}  // namespace netrisk
