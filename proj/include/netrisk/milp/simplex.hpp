#pragma once

#include "netrisk/milp/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace netrisk::milp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper };

/// Simplex basis over structural columns followed by one logical (row
/// activity) column per constraint.
struct Basis {
  std::vector<int> basic;
  std::vector<VarState> state;

  [[nodiscard]] bool empty() const noexcept { return basic.empty(); }
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;  // in the model's own sense, offset included
  std::vector<double> x;   // structural values
  long iterations = 0;
};

struct SimplexOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  /// Degenerate pivots tolerated (times the structural count) before
  /// switching to Bland's rule.
  int bland_factor = 3;
};

/// Dense bounded-variable primal simplex on the LP relaxation of a Model.
///
/// Each row i is written as a_i x - r_i = 0 with a logical variable r_i whose
/// bounds encode the row sense, so every column is a bounded variable and the
/// all-logical basis is always a valid starting point. Phase 1 minimizes the
/// sum of bound infeasibilities of the basic variables; phase 2 the objective.
/// The basis inverse is kept explicitly and refactored periodically.
///
/// Structural bounds are passed per solve so a branch-and-bound driver can
/// reuse one instance; the last optimal basis is retained as a warm start.
class DenseSimplex {
 public:
  explicit DenseSimplex(const Model& model, SimplexOptions options = {});

  LpResult solve(std::span<const double> lower, std::span<const double> upper,
                 long iteration_limit = -1);

  [[nodiscard]] const Basis& basis() const noexcept { return basis_; }
  void set_basis(Basis basis);
  void reset_basis();

  [[nodiscard]] int num_rows() const noexcept { return m_; }
  [[nodiscard]] int num_structurals() const noexcept { return nv_; }

 private:
  struct Entry {
    int row;
    double value;
  };

  void load_bounds(std::span<const double> lower, std::span<const double> upper);
  void place_nonbasic();
  bool refactor();
  void compute_basic_values();
  [[nodiscard]] double column_dot(int j, const Eigen::VectorXd& y) const;
  void column_times_inverse(int j, Eigen::VectorXd& out) const;
  [[nodiscard]] double infeasibility(int j) const;
  [[nodiscard]] double tol_for(double bound) const;

  const Model* model_;
  SimplexOptions opt_;
  int nv_ = 0;
  int m_ = 0;
  std::vector<std::vector<Entry>> cols_;
  std::vector<double> cost_;  // minimization form
  double sign_ = 1.0;
  std::vector<double> lo_, up_, x_;
  std::vector<int> pos_;  // basis position or -1
  Basis basis_;
  Eigen::MatrixXd binv_;
  bool binv_valid_ = false;
};

}  // namespace netrisk::milp
