#include "netrisk/scalarize.hpp"

#include "netrisk/errors.hpp"

#include <chrono>
#include <future>
#include <string>

namespace netrisk {

namespace {

using milp::RowSense;
using milp::Term;

std::string name2(const char* prefix, int k, int i) {
  return prefix + std::to_string(k) + "_" + std::to_string(i);
}

void require_variant(const FinancialNetwork& net, bool rv) {
  if (net.variant().is_rv() != rv) {
    throw Error(ErrorKind::InvalidConfig,
                rv ? "Rogers-Veraart builder called on a signed Eisenberg-Noe network"
                   : "Eisenberg-Noe builder called on a Rogers-Veraart network");
  }
}

/// Shared construction of the four scenario-expanded models. The capital of
/// node i in scenario k is shift_i + c_{g(i)} where c is z (weighted sum) or
/// mu (min step, one column for every node) and shift is B^T v or 0.
ScalarizationProblem build(const FinancialNetwork& net, const ScenarioSet& raw, const Grouping& grouping,
                           double gamma, ScalarizationKind kind, const Vector& weights, const Vector& anchor) {
  check_consistent(net, raw, grouping);
  ScalarizationProblem prob;
  prob.kind = kind;
  prob.gamma = gamma;
  prob.scenarios = raw.collapsed();
  prob.n = net.size();
  prob.groups = grouping.groups();
  const int n = prob.n;
  const int kk = prob.scenarios.size();
  const bool rv = net.variant().is_rv();
  const bool min_step = kind == ScalarizationKind::MinStep;

  BoundsRecord& b = prob.bounds;
  b.norm_x = prob.scenarios.max_abs();
  b.norm_pbar = net.pbar().lpNorm<Eigen::Infinity>();
  Vector shift = Vector::Zero(n);
  if (min_step) {
    if (anchor.size() != prob.groups) throw Error(ErrorKind::DimensionMismatch, "anchor length must equal G");
    prob.anchor = anchor;
    b.norm_v = anchor.lpNorm<Eigen::Infinity>();
    shift = grouping.spread(anchor);
  } else {
    if (weights.size() != prob.groups) throw Error(ErrorKind::DimensionMismatch, "weight length must equal G");
    if ((weights.array() < 0.0).any()) throw Error(ErrorKind::InvalidConfig, "weights must be nonnegative");
    prob.weights = weights;
  }
  const double np1 = static_cast<double>(n + 1);
  if (rv) {
    const double inv_alpha = 1.0 / net.variant().alpha;
    b.upper = b.norm_x + b.norm_v + inv_alpha * b.norm_pbar;
    b.lower = -(b.norm_x + b.norm_v + inv_alpha * np1 * b.norm_pbar);
  } else {
    b.big_m = 2.0 * b.norm_x + 2.0 * b.norm_v + np1 * b.norm_pbar;
    b.upper = b.norm_x + b.norm_v + b.norm_pbar;
    b.lower = -2.0 * b.big_m;
  }

  milp::Model& m = prob.model;
  if (min_step) {
    m.add_continuous("mu", b.lower, b.upper);
  } else {
    for (int g = 0; g < prob.groups; ++g) m.add_continuous("z_" + std::to_string(g), b.lower, b.upper);
  }
  for (int k = 0; k < kk; ++k) {
    for (int i = 0; i < n; ++i) m.add_continuous(name2("p_", k, i), 0.0, net.pbar()(i));
    for (int i = 0; i < n; ++i) m.add_binary(name2("s_", k, i));
  }
  auto capital = [&](int i) { return min_step ? 0 : grouping.group_of(i); };

  std::vector<Term> expectation;
  const Matrix& pi = net.pi();
  const double alpha = net.variant().alpha;
  const double beta = net.variant().beta;
  const double big_m = b.big_m;
  for (int k = 0; k < kk; ++k) {
    const double qk = prob.scenarios.q()(k);
    for (int i = 0; i < n; ++i) {
      const int p = prob.p_index(k, i);
      const int s = prob.s_index(k, i);
      const int c = capital(i);
      const double x = prob.scenarios.x()(k, i) + shift(i);
      const double pbar = net.pbar()(i);
      expectation.push_back({p, qk});
      std::vector<Term> inflow;
      for (int j = 0; j < n; ++j) {
        if (pi(j, i) != 0.0) inflow.push_back({prob.p_index(k, j), pi(j, i)});
      }
      if (rv) {
        // p <= alpha (x + c) + beta (pi^T p) + pbar s
        std::vector<Term> pay{{p, 1.0}, {c, -alpha}, {s, -pbar}};
        for (const Term& t : inflow) pay.push_back({t.var, -beta * t.coef});
        m.add_constraint(name2("pay_", k, i), std::move(pay), RowSense::LessEqual, alpha * x);
        // pbar s <= x + c + pi^T p
        std::vector<Term> solv{{s, pbar}, {c, -1.0}};
        for (const Term& t : inflow) solv.push_back({t.var, -t.coef});
        m.add_constraint(name2("solv_", k, i), std::move(solv), RowSense::LessEqual, x);
        // x + c >= 0
        m.add_constraint(name2("pos_", k, i), {{c, 1.0}}, RowSense::GreaterEqual, -x);
      } else {
        // p <= pi^T p + x + c + M (1 - s)
        std::vector<Term> pay{{p, 1.0}, {c, -1.0}, {s, big_m}};
        for (const Term& t : inflow) pay.push_back({t.var, -t.coef});
        m.add_constraint(name2("pay_", k, i), std::move(pay), RowSense::LessEqual, x + big_m);
        // p <= pbar s
        m.add_constraint(name2("cap_", k, i), {{p, 1.0}, {s, -pbar}}, RowSense::LessEqual, 0.0);
        // pi^T p + x + c <= M s
        std::vector<Term> sol = inflow;
        sol.push_back({c, 1.0});
        sol.push_back({s, -big_m});
        m.add_constraint(name2("sol_", k, i), std::move(sol), RowSense::LessEqual, -x);
      }
    }
  }
  m.add_constraint("expectation", std::move(expectation), RowSense::GreaterEqual, gamma);

  std::vector<Term> obj;
  if (min_step) {
    obj.push_back({0, 1.0});
  } else {
    for (int g = 0; g < prob.groups; ++g) obj.push_back({g, weights(g)});
  }
  m.set_objective(milp::ObjSense::Minimize, std::move(obj));
  return prob;
}

Vector unit(int groups, int group) {
  if (group < 0 || group >= groups) throw Error(ErrorKind::InvalidConfig, "group index out of range");
  Vector w = Vector::Zero(groups);
  w(group) = 1.0;
  return w;
}

}  // namespace

ScalarizationProblem build_z1(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                              double gamma, const Vector& weights) {
  return build(net, scen, grouping, gamma, ScalarizationKind::WeightedSum, weights, {});
}

ScalarizationProblem build_z1_en(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                                 double gamma, int group) {
  require_variant(net, false);
  return build_z1(net, scen, grouping, gamma, unit(grouping.groups(), group));
}

ScalarizationProblem build_z1_rv(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                                 double gamma, int group) {
  require_variant(net, true);
  return build_z1(net, scen, grouping, gamma, unit(grouping.groups(), group));
}

ScalarizationProblem build_z2_en(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                                 double gamma, const Vector& anchor) {
  require_variant(net, false);
  return build(net, scen, grouping, gamma, ScalarizationKind::MinStep, {}, anchor);
}

ScalarizationProblem build_z2_rv(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                                 double gamma, const Vector& anchor) {
  require_variant(net, true);
  return build(net, scen, grouping, gamma, ScalarizationKind::MinStep, {}, anchor);
}

ScalarizationProblem build_z1(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                              double gamma, int group) {
  return net.variant().is_rv() ? build_z1_rv(net, scen, grouping, gamma, group)
                               : build_z1_en(net, scen, grouping, gamma, group);
}

ScalarizationProblem build_z2(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                              double gamma, const Vector& anchor) {
  return net.variant().is_rv() ? build_z2_rv(net, scen, grouping, gamma, anchor)
                               : build_z2_en(net, scen, grouping, gamma, anchor);
}

ScalarizationProblem build_z1(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                              const RiskSpec& spec, int group) {
  return build_z1(net, scen, grouping, spec.gamma(net), group);
}

ScalarizationProblem build_z2(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                              const RiskSpec& spec, const Vector& anchor) {
  return build_z2(net, scen, grouping, spec.gamma(net), anchor);
}

ScalarizationResult solve_scalarization(const ScalarizationProblem& prob, milp::Backend* backend,
                                        const milp::Limits& limits) {
  const auto start = std::chrono::steady_clock::now();
  milp::Solution sol;
  if (backend != nullptr) {
    sol = backend->solve(prob.model, limits);
  } else {
    milp::BranchAndBound engine;
    sol = engine.solve(prob.model, limits);
  }
  ScalarizationResult r;
  r.status = sol.status;
  r.nodes = sol.nodes;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!sol.optimal()) return r;

  r.value = sol.objective;
  const int kk = prob.scenarios.size();
  r.p.resize(kk, prob.n);
  r.s.resize(kk, prob.n);
  for (int k = 0; k < kk; ++k) {
    for (int i = 0; i < prob.n; ++i) {
      r.p(k, i) = sol.values[static_cast<std::size_t>(prob.p_index(k, i))];
      r.s(k, i) = sol.values[static_cast<std::size_t>(prob.s_index(k, i))];
    }
  }
  const double slack = 1e-6 * (1.0 + std::abs(prob.bounds.upper));
  if (prob.kind == ScalarizationKind::MinStep) {
    r.mu = sol.values[0];
    r.z = prob.anchor.array() + r.mu;
    if (r.mu > prob.bounds.upper + slack) {
      throw Error(ErrorKind::SolverFailure, "step length exceeds its proven upper bound");
    }
  } else {
    r.z.resize(prob.groups);
    for (int g = 0; g < prob.groups; ++g) {
      r.z(g) = sol.values[static_cast<std::size_t>(g)];
      if (r.z(g) > prob.bounds.upper + slack) {
        throw Error(ErrorKind::SolverFailure, "capital exceeds its proven upper bound");
      }
    }
  }
  return r;
}

std::optional<Vector> ideal_point(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                                  double gamma) {
  const int groups = grouping.groups();
  std::vector<std::future<ScalarizationResult>> jobs;
  jobs.reserve(static_cast<std::size_t>(groups));
  for (int g = 0; g < groups; ++g) {
    jobs.push_back(std::async(std::launch::async, [&, g] {
      return solve_scalarization(build_z1(net, scen, grouping, gamma, g));
    }));
  }
  Vector ideal(groups);
  bool infeasible = false;
  for (int g = 0; g < groups; ++g) {
    const ScalarizationResult r = jobs[static_cast<std::size_t>(g)].get();
    if (r.status == milp::Status::Infeasible) {
      infeasible = true;
    } else if (!r.optimal()) {
      throw Error(ErrorKind::SolverFailure, "ideal-point problem ended with status " +
                                                std::string(milp::to_string(r.status)));
    } else {
      ideal(g) = r.value;
    }
  }
  if (infeasible) return std::nullopt;
  return ideal;
}

}  // namespace netrisk
