#include "netrisk/benson.hpp"

#include "netrisk/errors.hpp"
#include "netrisk/scalarize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <set>
#include <thread>

namespace netrisk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool leq(const Vector& a, const Vector& b, double tol) { return ((a - b).array() <= tol).all(); }

bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

std::vector<double> key(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Minimal elements with near-duplicates merged, in lexicographic order.
std::vector<Vector> minimal_elements(std::vector<Vector> pts, double tol) {
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Vector> out;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < pts.size() && !dominated; ++b) {
      if (a == b || !leq(pts[b], pts[a], tol)) continue;
      // b <= a. Drop a unless the two coincide, in which case keep the first.
      const bool same = leq(pts[a], pts[b], tol);
      dominated = !same || b < a;
    }
    if (!dominated) out.push_back(pts[a]);
  }
  return out;
}

}  // namespace

CornerSet corner_init(const Vector& z_ideal) {
  if (!z_ideal.allFinite()) throw Error(ErrorKind::InvalidConfig, "ideal point must be finite");
  return CornerSet{z_ideal, {z_ideal}};
}

CornerSet corner_remove_cone(const CornerSet& cs, const Vector& y, double tol) {
  if (y.size() != cs.floor.size()) throw Error(ErrorKind::DimensionMismatch, "point dimension mismatch");
  std::vector<Vector> next;
  for (const Vector& v : cs.corners) {
    if (((v - y).array() < -tol).all()) {
      for (int j = 0; j < y.size(); ++j) {
        Vector c = v;
        c(j) = y(j);
        next.push_back(std::move(c));
      }
    } else {
      next.push_back(v);
    }
  }
  return CornerSet{cs.floor, minimal_elements(std::move(next), tol)};
}

bool inner_contains_interior(const ApproximationPair& pair, const Vector& point) {
  if (pair.z_ub.size() == point.size() && (point.array() > pair.z_ub.array()).all()) return true;
  return std::any_of(pair.inner_points.begin(), pair.inner_points.end(),
                     [&](const Vector& y) { return (point.array() > y.array()).all(); });
}

std::vector<Vector> active_corners(const ApproximationPair& pair) {
  std::vector<Vector> out;
  for (const Vector& v : pair.outer.corners) {
    if (leq(v, pair.z_ub, kCornerTol)) out.push_back(v);
  }
  return out;
}

bool stopping_rule_holds(const ApproximationPair& pair) {
  for (const Vector& v : active_corners(pair)) {
    if (!inner_contains_interior(pair, (v.array() + pair.epsilon).matrix())) return false;
  }
  return true;
}

Vector auto_upper_bound(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping) {
  const double full = net.total_obligations();
  const auto ideal = ideal_point(net, scen, grouping, full);
  if (!ideal) throw Error(ErrorKind::SolverFailure, "full-payment ideal point is infeasible");
  const double pbar_norm = net.pbar().lpNorm<Eigen::Infinity>();
  Vector z_ub = ideal->array() + 2.0 * pbar_norm;
  if (member(net, scen, grouping, full, z_ub)) return z_ub;
  // Every node solvent in every scenario.
  const double scale = net.variant().is_rv() ? 1.0 / net.variant().alpha : 1.0;
  const double witness = scen.max_abs() + scale * pbar_norm;
  return z_ub.cwiseMax(Vector::Constant(z_ub.size(), witness));
}

double certify_step(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                    double gamma, const Vector& anchor, double mu) {
  auto ok = [&](double m) { return member(net, scen, grouping, gamma, (anchor.array() + m).matrix()); };
  if (ok(mu)) return mu;
  const double scale = 1.0 + std::abs(mu);
  for (double bump = 1e-9 * scale; bump <= 1e-5 * scale; bump *= 2.0) {
    if (ok(mu + bump)) return mu + bump;
  }
  throw Error(ErrorKind::SolverFailure, "minimum step result is not acceptable after tolerance correction");
}

ApproximationPair approximate(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                              const RiskSpec& spec, const ApproximateOptions& options) {
  const auto start = Clock::now();
  spec.validate();
  check_consistent(net, scen, grouping);
  const double gamma = spec.gamma(net);
  if (gamma > net.total_obligations()) {
    throw Error(ErrorKind::InfeasibleSpec, "threshold exceeds the total obligations");
  }

  ApproximationPair pair;
  pair.epsilon = spec.epsilon;
  pair.gamma = gamma;
  const auto ideal = ideal_point(net, scen, grouping, gamma);
  if (!ideal) throw Error(ErrorKind::InfeasibleSpec, "no capital allocation reaches the threshold");
  pair.z_ideal = *ideal;
  pair.ideal_seconds = seconds_since(start);

  if (spec.z_ub) {
    if (spec.z_ub->size() != grouping.groups()) {
      throw Error(ErrorKind::DimensionMismatch, "z_ub length must equal G");
    }
    if (!member(net, scen, grouping, gamma, *spec.z_ub)) {
      throw Error(ErrorKind::UpperBoundNotMember, "the given upper-bound point is not acceptable");
    }
    pair.z_ub = *spec.z_ub;
  } else {
    pair.z_ub = auto_upper_bound(net, scen, grouping);
  }
  pair.outer = corner_init(pair.z_ideal);

  std::set<std::vector<double>> processed;
  auto solve_step = [&](const Vector& v) {
    BensonStep step;
    const auto t0 = Clock::now();
    const ScalarizationResult r = solve_scalarization(build_z2(net, scen, grouping, gamma, v));
    if (!r.optimal()) {
      throw Error(ErrorKind::SolverFailure,
                  "minimum step problem ended with status " + std::string(milp::to_string(r.status)));
    }
    step.v = v;
    step.mu = certify_step(net, scen, grouping, gamma, v, r.mu);
    step.y = v.array() + step.mu;
    step.nodes = r.nodes;
    step.seconds = seconds_since(t0);
    return step;
  };
  auto apply = [&](BensonStep step) {
    pair.outer = corner_remove_cone(pair.outer, step.y);
    pair.inner_points.push_back(step.y);
    pair.history.push_back(std::move(step));
    ++pair.z2_count;
  };

  while (pair.iterations < options.max_iterations) {
    std::vector<Vector> eligible;
    for (const Vector& v : active_corners(pair)) {  // already in lexicographic order
      if (processed.count(key(v)) != 0) continue;
      if (inner_contains_interior(pair, (v.array() + pair.epsilon).matrix())) {
        processed.insert(key(v));
        continue;
      }
      eligible.push_back(v);
      if (!options.batch) break;
    }
    if (eligible.empty()) break;
    ++pair.iterations;
    if (!options.batch) {
      apply(solve_step(eligible.front()));
      continue;
    }
    const unsigned hw = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<BensonStep> steps(eligible.size());
    for (std::size_t lo = 0; lo < eligible.size(); lo += hw) {
      const std::size_t hi = std::min(eligible.size(), lo + hw);
      std::vector<std::future<BensonStep>> jobs;
      for (std::size_t u = lo; u < hi; ++u) {
        jobs.push_back(std::async(std::launch::async, solve_step, eligible[u]));
      }
      for (std::size_t u = lo; u < hi; ++u) steps[u] = jobs[u - lo].get();
    }
    for (BensonStep& s : steps) apply(std::move(s));
  }
  pair.certified = stopping_rule_holds(pair);
  pair.total_seconds = seconds_since(start);
  return pair;
}

}  // namespace netrisk
