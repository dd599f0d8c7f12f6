#include "netrisk/clearing.hpp"

#include "netrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace netrisk {

namespace {

void check_dims(const FinancialNetwork& net, const Vector& x, const Vector& p) {
  if (x.size() != net.size() || p.size() != net.size()) {
    std::ostringstream os;
    os << "expected vectors of length " << net.size() << ", got x: " << x.size()
       << ", p: " << p.size();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

void check_nonnegative(const Vector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < 0.0) {
      throw Error(ErrorKind::NegativeCashFlow,
                  "operating cash flow x[" + std::to_string(i) + "] is negative");
    }
  }
}

Vector resolve_weights(const FinancialNetwork& net, const Vector& weights) {
  if (weights.size() == 0) return Vector::Ones(net.size());
  if (weights.size() != net.size()) {
    throw Error(ErrorKind::DimensionMismatch, "weight vector length does not match network size");
  }
  if (!(weights.minCoeff() > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "clearing weights must be strictly positive");
  }
  return weights;
}

std::string idx(const char* prefix, Eigen::Index i) { return prefix + std::to_string(i); }

// Clearing solves use a gap far below the payment resolution so the optimum
// (the greatest clearing vector) is selected rather than a near-optimal one.
milp::BranchAndBound& clearing_engine() {
  thread_local milp::BranchAndBound engine(milp::Tolerances{1e-7, 1e-6, 1e-10});
  return engine;
}

ClearingResult solve_clearing(const FinancialNetwork& net, const Vector& x, const milp::Model& model,
                              milp::Backend* backend) {
  const milp::Solution sol = backend != nullptr ? backend->solve(model, {})
                                                : clearing_engine().solve(model, {});
  if (!sol.optimal()) {
    throw Error(ErrorKind::SolverFailure,
                "clearing MILP ended with status " + std::string(milp::to_string(sol.status)));
  }
  const auto n = net.size();
  ClearingResult r;
  r.p.resize(n);
  r.s.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r.p(i) = std::clamp(sol.values[static_cast<std::size_t>(i)], 0.0, net.pbar()(i));
    r.s(i) = sol.values[static_cast<std::size_t>(n + i)];
  }
  r.aggregate = sol.objective;
  r.residual = fixed_point_residual(net, x, r.p);
  r.nodes = sol.nodes;
  return r;
}

}  // namespace

Vector phi_en_signed(const FinancialNetwork& net, const Vector& x, const Vector& p) {
  check_dims(net, x, p);
  const Vector net_pos = net.inflows(p) + x;
  Vector out(net.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double e = net_pos(i);
    out(i) = e <= 0.0 ? 0.0 : std::min(e, net.pbar()(i));
  }
  return out;
}

Vector phi_rv(const FinancialNetwork& net, const Vector& x, const Vector& p) {
  check_dims(net, x, p);
  check_nonnegative(x);
  const double alpha = net.variant().alpha;
  const double beta = net.variant().beta;
  const Vector in = net.inflows(p);
  Vector out(net.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double pbar = net.pbar()(i);
    out(i) = pbar <= x(i) + in(i) ? pbar : alpha * x(i) + beta * in(i);
  }
  return out;
}

Vector phi(const FinancialNetwork& net, const Vector& x, const Vector& p) {
  return net.variant().is_rv() ? phi_rv(net, x, p) : phi_en_signed(net, x, p);
}

double fixed_point_residual(const FinancialNetwork& net, const Vector& x, const Vector& p) {
  return (phi(net, x, p) - p).lpNorm<Eigen::Infinity>();
}

Vector picard_clearing(const FinancialNetwork& net, const Vector& x, const PicardOptions& options) {
  Vector p = net.pbar();
  for (long it = 0; it < options.max_iter; ++it) {
    Vector next = phi(net, x, p);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (next(i) > p(i) + 1e-9 * (1.0 + std::abs(p(i)))) {
        throw std::logic_error("clearing iterates must be nonincreasing");
      }
    }
    const double step = (next - p).lpNorm<Eigen::Infinity>();
    p = std::move(next);
    if (step <= options.tol) return p;
  }
  throw Error(ErrorKind::NoConvergence,
              "fixed-point iteration did not converge in " + std::to_string(options.max_iter) + " steps");
}

milp::Model build_clearing_milp_en(const FinancialNetwork& net, const Vector& x, const Vector& weights) {
  if (x.size() != net.size()) throw Error(ErrorKind::DimensionMismatch, "cash-flow length mismatch");
  const Vector w = resolve_weights(net, weights);
  const auto n = net.size();
  const double big_m = static_cast<double>(n) * net.pbar().lpNorm<Eigen::Infinity>() +
                       x.lpNorm<Eigen::Infinity>();
  const Matrix& pi = net.pi();

  milp::Model m;
  for (Eigen::Index i = 0; i < n; ++i) m.add_continuous(idx("p_", i), 0.0, net.pbar()(i));
  for (Eigen::Index i = 0; i < n; ++i) m.add_binary(idx("s_", i));
  auto p = [](Eigen::Index i) { return static_cast<int>(i); };
  auto s = [n](Eigen::Index i) { return static_cast<int>(n + i); };

  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<milp::Term> in;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (pi(j, i) != 0.0) in.push_back({p(j), pi(j, i)});
    }
    // p_i <= (pi^T p)_i + x_i + M (1 - s_i)
    std::vector<milp::Term> t1{{p(i), 1.0}, {s(i), big_m}};
    for (const auto& t : in) t1.push_back({t.var, -t.coef});
    m.add_constraint(idx("pay_", i), std::move(t1), milp::RowSense::LessEqual, x(i) + big_m);
    // p_i <= pbar_i s_i
    m.add_constraint(idx("cap_", i), {{p(i), 1.0}, {s(i), -net.pbar()(i)}}, milp::RowSense::LessEqual, 0.0);
    // (pi^T p)_i + x_i <= M s_i
    std::vector<milp::Term> t3 = in;
    t3.push_back({s(i), -big_m});
    m.add_constraint(idx("sol_", i), std::move(t3), milp::RowSense::LessEqual, -x(i));
  }
  std::vector<milp::Term> obj;
  for (Eigen::Index i = 0; i < n; ++i) obj.push_back({p(i), w(i)});
  m.set_objective(milp::ObjSense::Maximize, std::move(obj));
  return m;
}

milp::Model build_clearing_milp_rv(const FinancialNetwork& net, const Vector& x, const Vector& weights) {
  if (x.size() != net.size()) throw Error(ErrorKind::DimensionMismatch, "cash-flow length mismatch");
  check_nonnegative(x);
  const Vector w = resolve_weights(net, weights);
  const auto n = net.size();
  const double alpha = net.variant().alpha;
  const double beta = net.variant().beta;
  const Matrix& pi = net.pi();

  milp::Model m;
  for (Eigen::Index i = 0; i < n; ++i) m.add_continuous(idx("p_", i), 0.0, net.pbar()(i));
  for (Eigen::Index i = 0; i < n; ++i) m.add_binary(idx("s_", i));
  auto p = [](Eigen::Index i) { return static_cast<int>(i); };
  auto s = [n](Eigen::Index i) { return static_cast<int>(n + i); };

  for (Eigen::Index i = 0; i < n; ++i) {
    // p_i <= alpha x_i + beta (pi^T p)_i + pbar_i s_i
    std::vector<milp::Term> t1{{p(i), 1.0}, {s(i), -net.pbar()(i)}};
    // pbar_i s_i <= x_i + (pi^T p)_i
    std::vector<milp::Term> t2{{s(i), net.pbar()(i)}};
    for (Eigen::Index j = 0; j < n; ++j) {
      if (pi(j, i) == 0.0) continue;
      t1.push_back({p(j), -beta * pi(j, i)});
      t2.push_back({p(j), -pi(j, i)});
    }
    m.add_constraint(idx("pay_", i), std::move(t1), milp::RowSense::LessEqual, alpha * x(i));
    m.add_constraint(idx("solv_", i), std::move(t2), milp::RowSense::LessEqual, x(i));
  }
  std::vector<milp::Term> obj;
  for (Eigen::Index i = 0; i < n; ++i) obj.push_back({p(i), w(i)});
  m.set_objective(milp::ObjSense::Maximize, std::move(obj));
  return m;
}

ClearingResult clearing_milp_en(const FinancialNetwork& net, const Vector& x, const Vector& weights,
                                milp::Backend* backend) {
  return solve_clearing(net, x, build_clearing_milp_en(net, x, weights), backend);
}

ClearingResult clearing_milp_rv(const FinancialNetwork& net, const Vector& x, const Vector& weights,
                                milp::Backend* backend) {
  if (x.size() != net.size()) throw Error(ErrorKind::DimensionMismatch, "cash-flow length mismatch");
  if ((x.array() < 0.0).any()) {
    ClearingResult r;
    r.p = Vector::Zero(net.size());
    r.s = Vector::Zero(net.size());
    r.aggregate = kUndefinedAggregate;
    r.residual = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  return solve_clearing(net, x, build_clearing_milp_rv(net, x, weights), backend);
}

ClearingResult clear(const FinancialNetwork& net, const Vector& x, const Vector& weights,
                     milp::Backend* backend) {
  return net.variant().is_rv() ? clearing_milp_rv(net, x, weights, backend)
                               : clearing_milp_en(net, x, weights, backend);
}

double aggregate(const FinancialNetwork& net, const Vector& x, const Vector& weights,
                 milp::Backend* backend) {
  return clear(net, x, weights, backend).aggregate;
}

bool AxiomReport::all_pass() const noexcept {
  return std::all_of(nodes.begin(), nodes.end(), [](const NodeAxioms& a) { return a.ok(); });
}

AxiomReport verify_clearing(const FinancialNetwork& net, const Vector& x, const Vector& p, double tol) {
  check_dims(net, x, p);
  const Vector in = net.inflows(p);
  AxiomReport report;
  report.nodes.resize(static_cast<std::size_t>(net.size()));
  const bool rv = net.variant().is_rv();
  const double alpha = net.variant().alpha;
  const double beta = net.variant().beta;
  for (Eigen::Index i = 0; i < net.size(); ++i) {
    NodeAxioms& a = report.nodes[static_cast<std::size_t>(i)];
    const double pbar = net.pbar()(i);
    const double t = tol * std::max(1.0, pbar);
    const double available = in(i) + x(i);
    if (rv) {
      a.limited_liability = p(i) <= available + t;
      a.absolute_priority = std::abs(p(i) - pbar) <= t ||
                            std::abs(p(i) - (alpha * x(i) + beta * in(i))) <= t;
    } else if (available <= 0.0) {
      a.immediate_default = std::abs(p(i)) <= t;
    } else {
      a.limited_liability = p(i) <= available + t;
      a.absolute_priority = std::abs(p(i) - pbar) <= t || std::abs(p(i) - available) <= t;
    }
  }
  return report;
}

}  // namespace netrisk
