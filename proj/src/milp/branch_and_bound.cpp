#include "netrisk/errors.hpp"
#include "netrisk/milp/simplex.hpp"
#include "netrisk/milp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace netrisk::milp {

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

namespace {

struct Node {
  double bound = -kInf;  // minimization form
  long id = 0;
  int depth = 0;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0 or 1
  Basis basis;
};

// Max-heap comparator: the "largest" node is the one to explore next.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

/// Tightens the bound of the sole unfixed variable of each row. Returns false
/// when some row cannot be satisfied.
bool propagate_singletons(const Model& model, std::vector<double>& lo, std::vector<double>& up,
                          const std::vector<char>& is_binary, const Tolerances& tol) {
  constexpr int kMaxPasses = 4;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool changed = false;
    for (const Constraint& c : model.constraints()) {
      int free_count = 0;
      const Term* free_term = nullptr;
      double fixed_act = 0.0;
      for (const Term& t : c.terms) {
        const auto u = static_cast<std::size_t>(t.var);
        if (up[u] - lo[u] <= 1e-12) {
          fixed_act += t.coef * lo[u];
        } else {
          ++free_count;
          free_term = &t;
          if (free_count > 1) break;
        }
      }
      if (free_count > 1) continue;
      const double slack_tol = tol.primal * (1.0 + std::abs(c.rhs));
      if (free_count == 0) {
        const bool ok = (c.sense != RowSense::LessEqual || fixed_act <= c.rhs + slack_tol) &&
                        (c.sense != RowSense::GreaterEqual || fixed_act >= c.rhs - slack_tol) &&
                        (c.sense != RowSense::Equal || std::abs(fixed_act - c.rhs) <= slack_tol);
        if (!ok) return false;
        continue;
      }
      const auto u = static_cast<std::size_t>(free_term->var);
      const double a = free_term->coef;
      const double limit = (c.rhs - fixed_act) / a;
      const bool caps_above = (c.sense == RowSense::Equal) ||
                              ((c.sense == RowSense::LessEqual) == (a > 0.0));
      const bool caps_below = (c.sense == RowSense::Equal) ||
                              ((c.sense == RowSense::GreaterEqual) == (a > 0.0));
      const double eps = 1e-9 * (1.0 + std::abs(limit));
      if (caps_above && limit < up[u] - eps) {
        double nu = limit;
        if (is_binary[u]) nu = limit < 1.0 - tol.integrality ? 0.0 : 1.0;
        if (nu < up[u]) {
          up[u] = nu;
          changed = true;
        }
      }
      if (caps_below && limit > lo[u] + eps) {
        double nl = limit;
        if (is_binary[u]) nl = limit > tol.integrality ? 1.0 : 0.0;
        if (nl > lo[u]) {
          lo[u] = nl;
          changed = true;
        }
      }
      if (lo[u] > up[u]) {
        if (lo[u] - up[u] > tol.primal * (1.0 + std::abs(up[u]))) return false;
        lo[u] = up[u];
      }
    }
    if (!changed) break;
  }
  return true;
}

}  // namespace

Solution BranchAndBound::solve(const Model& model, const Limits& limits) {
  model.validate();
  const int nv = model.num_variables();
  std::vector<double> base_lo(static_cast<std::size_t>(nv)), base_up(static_cast<std::size_t>(nv));
  std::vector<char> is_binary(static_cast<std::size_t>(nv), 0);
  std::vector<int> binaries;
  for (int j = 0; j < nv; ++j) {
    const Variable& v = model.variable(j);
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      throw Error(ErrorKind::UnboundedVariable, "variable " + v.name + " has an infinite bound");
    }
    base_lo[static_cast<std::size_t>(j)] = v.lower;
    base_up[static_cast<std::size_t>(j)] = v.upper;
    if (v.type == VarType::Binary) {
      is_binary[static_cast<std::size_t>(j)] = 1;
      binaries.push_back(j);
    }
  }
  const double sign = model.objective().sense == ObjSense::Maximize ? -1.0 : 1.0;
  auto gap_tol = [&](double v) { return tol_.relative_gap * (1.0 + std::abs(v)); };

  DenseSimplex lp(model);
  Solution sol;
  double incumbent = kInf;
  std::vector<double> incumbent_x;
  double pruned_bound = kInf;
  bool incomplete = false;
  long next_id = 0;

  std::vector<Node> heap;
  std::vector<Node> stack;
  NodeOrder order;
  heap.push_back({-kInf, next_id++, 0, std::vector<std::int8_t>(binaries.size(), -1), {}});

  std::vector<double> lo, up;
  while (!heap.empty() || !stack.empty()) {
    if (sol.nodes >= limits.max_nodes || sol.simplex_iterations >= limits.max_simplex_iterations) {
      incomplete = true;
      break;
    }
    Node node;
    if (!stack.empty()) {
      node = std::move(stack.back());
      stack.pop_back();
    } else {
      std::pop_heap(heap.begin(), heap.end(), order);
      node = std::move(heap.back());
      heap.pop_back();
    }
    if (node.bound >= incumbent - gap_tol(incumbent)) {
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }

    lo = base_lo;
    up = base_up;
    for (std::size_t b = 0; b < binaries.size(); ++b) {
      if (node.fix[b] >= 0) {
        const auto u = static_cast<std::size_t>(binaries[b]);
        lo[u] = up[u] = node.fix[b];
      }
    }
    if (!propagate_singletons(model, lo, up, is_binary, tol_)) continue;

    if (!node.basis.empty()) lp.set_basis(std::move(node.basis));
    const LpResult relax = lp.solve(lo, up);
    ++sol.nodes;
    sol.simplex_iterations += relax.iterations;
    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status == LpStatus::IterationLimit) {
      incomplete = true;
      continue;
    }
    if (relax.status == LpStatus::Unbounded) {
      throw Error(ErrorKind::SolverFailure, "LP relaxation unbounded despite finite bounds");
    }
    const double bound = sign * relax.objective;
    if (bound >= incumbent - gap_tol(incumbent)) {
      pruned_bound = std::min(pruned_bound, bound);
      continue;
    }

    int branch = -1;
    double best_frac = tol_.integrality;
    for (std::size_t b = 0; b < binaries.size(); ++b) {
      const auto u = static_cast<std::size_t>(binaries[b]);
      if (up[u] - lo[u] <= 0.0) continue;
      const double f = std::abs(relax.x[u] - std::round(relax.x[u]));
      if (f > best_frac) {
        best_frac = f;
        branch = static_cast<int>(b);
      }
    }

    Basis parent_basis = lp.basis();
    if (branch < 0) {
      // Integral within tolerance: re-solve with the binaries pinned.
      std::vector<double> plo = lo, pup = up;
      for (int j : binaries) {
        const auto u = static_cast<std::size_t>(j);
        plo[u] = pup[u] = std::round(relax.x[u]);
      }
      const LpResult polished = lp.solve(plo, pup);
      sol.simplex_iterations += polished.iterations;
      if (polished.status == LpStatus::Optimal) {
        const double v = sign * polished.objective;
        if (v < incumbent) {
          incumbent = v;
          incumbent_x = polished.x;
        }
        continue;
      }
      double worst = 0.0;
      for (std::size_t b = 0; b < binaries.size(); ++b) {
        const auto u = static_cast<std::size_t>(binaries[b]);
        if (up[u] - lo[u] <= 0.0) continue;
        const double f = std::abs(relax.x[u] - std::round(relax.x[u]));
        if (f > worst) {
          worst = f;
          branch = static_cast<int>(b);
        }
      }
      if (branch < 0) continue;
    }

    const bool dfs = stack.size() + heap.size() + 2 > limits.open_node_threshold || !stack.empty();
    for (std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
      Node child{bound, next_id++, node.depth + 1, node.fix, parent_basis};
      child.fix[static_cast<std::size_t>(branch)] = value;
      if (dfs) {
        stack.push_back(std::move(child));
      } else {
        heap.push_back(std::move(child));
        std::push_heap(heap.begin(), heap.end(), order);
      }
    }
    if (dfs) std::swap(stack[stack.size() - 1], stack[stack.size() - 2]);  // explore the 1-branch first
  }

  double open_bound = pruned_bound;
  for (const Node& n : heap) open_bound = std::min(open_bound, n.bound);
  for (const Node& n : stack) open_bound = std::min(open_bound, n.bound);

  if (std::isfinite(incumbent)) {
    sol.status = incomplete ? Status::IterationLimit : Status::Optimal;
    sol.values = std::move(incumbent_x);
    for (int j : binaries) {
      auto& v = sol.values[static_cast<std::size_t>(j)];
      v = std::round(v);
    }
    sol.objective = model.evaluate_objective(sol.values);
    sol.gap = std::max(0.0, incumbent - std::min(incumbent, open_bound));
  } else {
    sol.status = incomplete ? Status::IterationLimit : Status::Infeasible;
    sol.gap = kInf;
  }
  return sol;
}

Solution solve(const Model& model, const Limits& limits) {
  BranchAndBound engine;
  return engine.solve(model, limits);
}

std::shared_ptr<Backend> default_backend() { return std::make_shared<BranchAndBound>(); }

}  // namespace netrisk::milp
