#pragma once

#include "netrisk/milp/model.hpp"
#include "netrisk/milp/solver.hpp"
#include "netrisk/network.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace netrisk {

/// Residual bound that every solver-produced clearing vector must meet.
inline constexpr double kFixedPointTol = 1e-6;

/// Aggregate reported when the Rogers-Veraart aggregation is undefined
/// (some operating cash flow is negative).
inline constexpr double kUndefinedAggregate = -std::numeric_limits<double>::infinity();

/// Signed Eisenberg-Noe clearing map: (pbar ^ (pi^T p + x))^+. A node whose
/// net position pi^T p + x is exactly 0 pays nothing.
[[nodiscard]] Vector phi_en_signed(const FinancialNetwork& net, const Vector& x, const Vector& p);

/// Rogers-Veraart clearing map: pbar_i when node i can pay in full, else the
/// recoverable amount alpha x_i + beta (pi^T p)_i. Requires x >= 0.
[[nodiscard]] Vector phi_rv(const FinancialNetwork& net, const Vector& x, const Vector& p);

/// Dispatches on the network variant.
[[nodiscard]] Vector phi(const FinancialNetwork& net, const Vector& x, const Vector& p);

[[nodiscard]] double fixed_point_residual(const FinancialNetwork& net, const Vector& x, const Vector& p);

struct PicardOptions {
  double tol = 1e-10;
  long max_iter = 10'000;
};

/// Greatest clearing vector by monotone iteration of the clearing map from
/// pbar. Throws NoConvergence after max_iter steps.
[[nodiscard]] Vector picard_clearing(const FinancialNetwork& net, const Vector& x,
                                     const PicardOptions& options = {});

struct ClearingResult {
  Vector p;
  Vector s;  // default indicators from the MILP (0/1)
  double aggregate = 0.0;
  double residual = 0.0;
  long nodes = 0;
};

/// Clearing MILP for the signed Eisenberg-Noe model, big-M = n |pbar|_inf + |x|_inf.
/// Variables are laid out as p_0..p_{n-1}, s_0..s_{n-1}.
[[nodiscard]] milp::Model build_clearing_milp_en(const FinancialNetwork& net, const Vector& x,
                                                 const Vector& weights);
/// Clearing MILP for Rogers-Veraart (no big-M needed). Requires x >= 0.
[[nodiscard]] milp::Model build_clearing_milp_rv(const FinancialNetwork& net, const Vector& x,
                                                 const Vector& weights);

/// Solves the signed Eisenberg-Noe clearing MILP with positive weights (all
/// ones when empty). The aggregate is weights^T p.
[[nodiscard]] ClearingResult clearing_milp_en(const FinancialNetwork& net, const Vector& x,
                                              const Vector& weights = {},
                                              milp::Backend* backend = nullptr);

/// Rogers-Veraart counterpart. If any x_i < 0 no solve happens and the
/// aggregate is kUndefinedAggregate.
[[nodiscard]] ClearingResult clearing_milp_rv(const FinancialNetwork& net, const Vector& x,
                                              const Vector& weights = {},
                                              milp::Backend* backend = nullptr);

[[nodiscard]] ClearingResult clear(const FinancialNetwork& net, const Vector& x,
                                   const Vector& weights = {}, milp::Backend* backend = nullptr);

/// Optimal value of the clearing MILP (the aggregation function).
[[nodiscard]] double aggregate(const FinancialNetwork& net, const Vector& x,
                               const Vector& weights = {}, milp::Backend* backend = nullptr);

struct NodeAxioms {
  bool immediate_default = true;  // signed EN only
  bool limited_liability = true;
  bool absolute_priority = true;

  [[nodiscard]] bool ok() const noexcept {
    return immediate_default && limited_liability && absolute_priority;
  }
};

struct AxiomReport {
  std::vector<NodeAxioms> nodes;
  [[nodiscard]] bool all_pass() const noexcept;
};

/// Checks the clearing-vector axioms of the network's variant for each node.
[[nodiscard]] AxiomReport verify_clearing(const FinancialNetwork& net, const Vector& x,
                                          const Vector& p, double tol = 1e-9);

}  // namespace netrisk
