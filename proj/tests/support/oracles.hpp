#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include "netrisk/benson.hpp"
#include "netrisk/network.hpp"
#include "netrisk/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using netrisk::Matrix;
using netrisk::Vector;

/// Clearing map written out with explicit loops, one branch per case.
inline Vector brute_phi(const netrisk::FinancialNetwork& net, const Vector& x, const Vector& p) {
  const int n = net.size();
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    double in = 0.0;
    for (int j = 0; j < n; ++j) in += net.pi()(j, i) * p(j);
    const double avail = in + x(i);
    if (net.variant().is_rv()) {
      out(i) = net.pbar()(i) <= avail ? net.pbar()(i) : net.variant().alpha * x(i) + net.variant().beta * in;
    } else if (avail <= 0.0) {
      out(i) = 0.0;
    } else if (avail <= net.pbar()(i)) {
      out(i) = avail;
    } else {
      out(i) = net.pbar()(i);
    }
  }
  return out;
}

/// Smallest t in [lo, hi] with pred(t) true, for a monotone predicate with
/// pred(hi) true. Returns lo when pred(lo) already holds.
inline double bisect(const std::function<bool(double)>& pred, double lo, double hi, double tol = 1e-7) {
  if (pred(lo)) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Minimum step along 1 from v into the risk set, by bisection on membership.
inline double step_by_bisection(const netrisk::FinancialNetwork& net, const netrisk::ScenarioSet& scen,
                                const netrisk::Grouping& grouping, double gamma, const Vector& v,
                                double lo, double hi) {
  return bisect(
      [&](double mu) { return netrisk::member(net, scen, grouping, gamma, (v.array() + mu).matrix()); }, lo, hi);
}

/// Smallest z_l in the risk set with every other coordinate at `others`.
inline double coordinate_by_bisection(const netrisk::FinancialNetwork& net, const netrisk::ScenarioSet& scen,
                                      const netrisk::Grouping& grouping, double gamma, int group,
                                      double others, double lo, double hi) {
  return bisect(
      [&](double t) {
        Vector z = Vector::Constant(grouping.groups(), others);
        z(group) = t;
        return netrisk::member(net, scen, grouping, gamma, z);
      },
      lo, hi);
}

/// Region {z >= floor} with every open cone y - int(R^G_+) removed.
inline bool in_staircase(const Vector& z, const Vector& floor, const std::vector<Vector>& cones) {
  if ((z.array() < floor.array()).any()) return false;
  for (const Vector& y : cones) {
    if ((z.array() < y.array()).all()) return false;
  }
  return true;
}

/// Minimal points of the staircase region by enumeration over the grid of
/// all coordinates that occur in floor and in the cone apexes.
inline std::vector<Vector> grid_corners(const Vector& floor, const std::vector<Vector>& cones) {
  const int g = static_cast<int>(floor.size());
  std::vector<std::vector<double>> axis(static_cast<std::size_t>(g));
  for (int j = 0; j < g; ++j) {
    std::set<double> vals{floor(j)};
    for (const Vector& y : cones) {
      if (y(j) >= floor(j)) vals.insert(y(j));
    }
    axis[static_cast<std::size_t>(j)].assign(vals.begin(), vals.end());
  }
  std::vector<Vector> region;
  std::vector<std::size_t> idx(static_cast<std::size_t>(g), 0);
  for (;;) {
    Vector z(g);
    for (int j = 0; j < g; ++j) z(j) = axis[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
    if (in_staircase(z, floor, cones)) region.push_back(z);
    int j = 0;
    while (j < g && ++idx[static_cast<std::size_t>(j)] == axis[static_cast<std::size_t>(j)].size()) {
      idx[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == g) break;
  }
  std::vector<Vector> minimal;
  for (const Vector& a : region) {
    bool dominated = false;
    for (const Vector& b : region) {
      if ((b.array() <= a.array()).all() && (b.array() != a.array()).any()) {
        dominated = true;
        break;
      }
    }
    if (!dominated) minimal.push_back(a);
  }
  std::sort(minimal.begin(), minimal.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return minimal;
}

}  // namespace oracle
