#pragma once

#include "netrisk/milp/solver.hpp"
#include "netrisk/network.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace netrisk {

/// Partition of the nodes into G groups. Group indices are 0-based here;
/// file formats use 1-based indices.
class Grouping {
 public:
  /// Throws InvalidConfig on out-of-range indices or empty groups.
  static Grouping from_assignment(std::vector<int> assignment, int groups = -1);
  /// Consecutive blocks: the first sizes[0] nodes form group 0, and so on.
  static Grouping from_sizes(const std::vector<int>& sizes);
  /// Every node in one group.
  static Grouping single(int n) { return from_sizes({n}); }

  [[nodiscard]] int groups() const noexcept { return groups_; }
  [[nodiscard]] int nodes() const noexcept { return static_cast<int>(assignment_.size()); }
  [[nodiscard]] int group_of(int node) const { return assignment_.at(static_cast<std::size_t>(node)); }
  [[nodiscard]] const std::vector<int>& assignment() const noexcept { return assignment_; }
  [[nodiscard]] std::vector<int> sizes() const;

  /// G x n grouping matrix.
  [[nodiscard]] Matrix matrix() const;
  /// B^T z: every node receives its group's entry of z.
  [[nodiscard]] Vector spread(const Vector& z) const;

 private:
  Grouping(std::vector<int> assignment, int groups)
      : assignment_(std::move(assignment)), groups_(groups) {}

  std::vector<int> assignment_;
  int groups_ = 0;
};

inline constexpr double kProbabilitySumTol = 1e-12;

/// K cash-flow scenarios (rows of X) with probabilities q.
class ScenarioSet {
 public:
  ScenarioSet() = default;
  /// Throws InvalidConfig unless q > 0 and sum(q) = 1 within 1e-12.
  static ScenarioSet create(Matrix x, Vector q);
  static ScenarioSet uniform(Matrix x);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(q_.size()); }
  [[nodiscard]] int nodes() const noexcept { return static_cast<int>(x_.cols()); }
  [[nodiscard]] const Matrix& x() const noexcept { return x_; }
  [[nodiscard]] const Vector& q() const noexcept { return q_; }
  [[nodiscard]] Vector cash_flow(int k) const { return x_.row(k).transpose(); }
  /// Largest absolute entry of X.
  [[nodiscard]] double max_abs() const;

  /// Identical rows merged, probabilities summed; first-occurrence order kept.
  [[nodiscard]] ScenarioSet collapsed() const;

 private:
  ScenarioSet(Matrix x, Vector q) : x_(std::move(x)), q_(std::move(q)) {}

  Matrix x_;
  Vector q_;
};

/// Acceptance threshold and approximation settings. An empty z_ub means
/// "auto".
struct RiskSpec {
  double gamma_p = 0.0;
  double epsilon = 0.5;
  std::optional<Vector> z_ub;

  [[nodiscard]] double gamma(const FinancialNetwork& net) const {
    return gamma_p * net.total_obligations();
  }
  /// Throws InvalidConfig.
  void validate() const;
};

struct GaussianCashFlow {
  Vector nu;  // mean per group
  double sigma = 1.0;
  double rho = 0.0;
};

struct GammaCopulaCashFlow {
  Vector kappa;  // shape per group
  Vector theta;  // scale per group
  double rho = 0.0;
};

using CashFlowModel = std::variant<GaussianCashFlow, GammaCopulaCashFlow>;

struct GeneratorConfig {
  std::vector<int> group_sizes;
  Matrix q_con;  // G x G edge probabilities
  Matrix l_gr;   // G x G liability per edge
  CashFlowModel cash_flow = GaussianCashFlow{};
  Variant variant = Variant::signed_en();
  std::uint64_t seed = 0;

  [[nodiscard]] int nodes() const;
  [[nodiscard]] Grouping grouping() const { return Grouping::from_sizes(group_sizes); }
  /// Throws InvalidConfig.
  void validate() const;
};

inline constexpr int kMaxNetworkAttempts = 1000;

/// Erdos-Renyi style network: l(i, j) = l_gr(g(i), g(j)) when the edge draw
/// succeeds. Degenerate draws are resampled; throws GenerationExhausted after
/// kMaxNetworkAttempts.
[[nodiscard]] FinancialNetwork generate_network(const GeneratorConfig& cfg);

/// K equally likely cash-flow scenarios. Each (k, i) cell owns its own random
/// stream, so raising K leaves earlier rows unchanged.
[[nodiscard]] ScenarioSet generate_scenarios(const GeneratorConfig& cfg, int k);

/// sum_k q_k Lambda(X_k + B^T z). kUndefinedAggregate when some scenario is
/// undefined (Rogers-Veraart with a negative cash flow).
[[nodiscard]] double expected_aggregate(const FinancialNetwork& net, const ScenarioSet& scen,
                                        const Grouping& grouping, const Vector& z,
                                        const Vector& weights = {},
                                        milp::Backend* backend = nullptr);

inline constexpr double kMembershipTol = 1e-9;

/// z belongs to the risk set when the expected aggregate reaches gamma.
[[nodiscard]] bool member(const FinancialNetwork& net, const ScenarioSet& scen,
                          const Grouping& grouping, double gamma, const Vector& z,
                          milp::Backend* backend = nullptr);
[[nodiscard]] bool member(const FinancialNetwork& net, const ScenarioSet& scen,
                          const Grouping& grouping, const RiskSpec& spec, const Vector& z,
                          milp::Backend* backend = nullptr);

/// Throws DimensionMismatch unless network, scenarios and grouping agree on n.
void check_consistent(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping);

}  // namespace netrisk
