#pragma once

// Small networks and random instance builders shared by the tests.

#include "netrisk/network.hpp"
#include "netrisk/scenarios.hpp"

#include <algorithm>
#include <random>

namespace fixtures {

using netrisk::FinancialNetwork;
using netrisk::Matrix;
using netrisk::Variant;
using netrisk::Vector;

/// Two nodes owing each other 20 and 25.
inline FinancialNetwork two_node(Variant v) {
  Matrix l(2, 2);
  l << 0, 20, 25, 0;
  return FinancialNetwork::from_liabilities(l, v);
}

/// Two nodes owing each other 1.
inline FinancialNetwork unit_cycle(Variant v = Variant::signed_en()) {
  Matrix l(2, 2);
  l << 0, 1, 1, 0;
  return FinancialNetwork::from_liabilities(l, v);
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Dense-ish random liabilities with every row nonzero.
inline FinancialNetwork random_network(int n, std::mt19937_64& rng, Variant v, double density = 0.6) {
  std::uniform_real_distribution<double> amount(1.0, 50.0);
  std::bernoulli_distribution edge(density);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Matrix l = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && edge(rng)) l(i, j) = amount(rng);
    }
    if (l.row(i).sum() == 0.0) {
      int j = pick(rng);
      if (j == i) j = (i + 1) % n;
      l(i, j) = amount(rng);
    }
  }
  return FinancialNetwork::from_liabilities(l, v);
}

/// Cash flows with a per-instance mean in [-100, 100] (or [0, 100] when
/// nonnegative is requested).
inline Vector random_cash_flow(int n, std::mt19937_64& rng, bool nonnegative) {
  std::uniform_real_distribution<double> mean_dist(nonnegative ? 0.0 : -100.0, 100.0);
  const double mean = mean_dist(rng);
  std::normal_distribution<double> noise(mean, 30.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) {
    x(i) = noise(rng);
    if (nonnegative) x(i) = std::abs(x(i));
  }
  return x;
}

struct Instance {
  FinancialNetwork net;
  netrisk::ScenarioSet scen;
  netrisk::Grouping grouping;
};

/// Random (network, scenarios, grouping) triple with G groups of
/// consecutive nodes.
inline Instance random_instance(int n, int k, int groups, std::mt19937_64& rng, Variant v) {
  FinancialNetwork net = random_network(n, rng, v);
  Matrix x(k, n);
  const bool nonneg = v.is_rv();
  for (int r = 0; r < k; ++r) x.row(r) = random_cash_flow(n, rng, nonneg).transpose();
  std::vector<int> sizes(static_cast<std::size_t>(groups), n / groups);
  sizes.back() += n - (n / groups) * groups;
  return {net, netrisk::ScenarioSet::uniform(x), netrisk::Grouping::from_sizes(sizes)};
}

/// Threshold in (lo, 1^T pbar] with lo the largest obligation total of the
/// complement of a single group, so no group can reach the threshold alone
/// and every weighted-sum optimum is finite.
inline double interior_gamma(const FinancialNetwork& net, const netrisk::Grouping& grouping, double frac) {
  const double total = net.total_obligations();
  double lo = 0.0;
  for (int g = 0; g < grouping.groups(); ++g) {
    double rest = 0.0;
    for (int i = 0; i < net.size(); ++i) {
      if (grouping.group_of(i) != g) rest += net.pbar()(i);
    }
    lo = std::max(lo, rest);
  }
  return lo + frac * (total - lo);
}

}  // namespace fixtures
