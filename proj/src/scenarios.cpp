#include "netrisk/scenarios.hpp"

#include "netrisk/clearing.hpp"
#include "netrisk/errors.hpp"
#include "netrisk/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace netrisk {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

// ---------------------------------------------------------------- Grouping

Grouping Grouping::from_assignment(std::vector<int> assignment, int groups) {
  if (assignment.empty()) config_error("grouping needs at least one node");
  const int max_idx = *std::max_element(assignment.begin(), assignment.end());
  if (groups < 0) groups = max_idx + 1;
  std::vector<int> count(static_cast<std::size_t>(std::max(groups, 0)), 0);
  for (int g : assignment) {
    if (g < 0 || g >= groups) config_error("group index " + std::to_string(g) + " out of range");
    ++count[static_cast<std::size_t>(g)];
  }
  for (int g = 0; g < groups; ++g) {
    if (count[static_cast<std::size_t>(g)] == 0) config_error("group " + std::to_string(g) + " is empty");
  }
  return Grouping(std::move(assignment), groups);
}

Grouping Grouping::from_sizes(const std::vector<int>& sizes) {
  std::vector<int> assignment;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    if (sizes[g] <= 0) config_error("group sizes must be positive");
    assignment.insert(assignment.end(), static_cast<std::size_t>(sizes[g]), static_cast<int>(g));
  }
  return from_assignment(std::move(assignment), static_cast<int>(sizes.size()));
}

std::vector<int> Grouping::sizes() const {
  std::vector<int> out(static_cast<std::size_t>(groups_), 0);
  for (int g : assignment_) ++out[static_cast<std::size_t>(g)];
  return out;
}

Matrix Grouping::matrix() const {
  Matrix b = Matrix::Zero(groups_, nodes());
  for (int i = 0; i < nodes(); ++i) b(assignment_[static_cast<std::size_t>(i)], i) = 1.0;
  return b;
}

Vector Grouping::spread(const Vector& z) const {
  if (z.size() != groups_) throw Error(ErrorKind::DimensionMismatch, "capital vector length must equal G");
  Vector out(nodes());
  for (int i = 0; i < nodes(); ++i) out(i) = z(assignment_[static_cast<std::size_t>(i)]);
  return out;
}

// ------------------------------------------------------------- ScenarioSet

ScenarioSet ScenarioSet::create(Matrix x, Vector q) {
  if (x.rows() != q.size()) throw Error(ErrorKind::DimensionMismatch, "one probability per scenario required");
  if (q.size() == 0) config_error("scenario set is empty");
  if (!(q.minCoeff() > 0.0)) config_error("scenario probabilities must be positive");
  if (std::abs(q.sum() - 1.0) > kProbabilitySumTol) config_error("scenario probabilities must sum to 1");
  if (!x.allFinite()) config_error("cash flows must be finite");
  return ScenarioSet(std::move(x), std::move(q));
}

ScenarioSet ScenarioSet::uniform(Matrix x) {
  const auto k = x.rows();
  if (k == 0) config_error("scenario set is empty");
  return create(std::move(x), Vector::Constant(k, 1.0 / static_cast<double>(k)));
}

double ScenarioSet::max_abs() const { return x_.size() == 0 ? 0.0 : x_.cwiseAbs().maxCoeff(); }

ScenarioSet ScenarioSet::collapsed() const {
  std::vector<int> keep;
  std::vector<double> prob;
  for (int k = 0; k < size(); ++k) {
    bool merged = false;
    for (std::size_t u = 0; u < keep.size(); ++u) {
      if (x_.row(keep[u]) == x_.row(k)) {
        prob[u] += q_(k);
        merged = true;
        break;
      }
    }
    if (!merged) {
      keep.push_back(k);
      prob.push_back(q_(k));
    }
  }
  Matrix x(static_cast<Eigen::Index>(keep.size()), x_.cols());
  Vector q(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t u = 0; u < keep.size(); ++u) {
    x.row(static_cast<Eigen::Index>(u)) = x_.row(keep[u]);
    q(static_cast<Eigen::Index>(u)) = prob[u];
  }
  return ScenarioSet(std::move(x), std::move(q));
}

void RiskSpec::validate() const {
  if (!(gamma_p >= 0.0 && gamma_p <= 1.0)) config_error("gamma_p must lie in [0, 1]");
  if (!(epsilon > 0.0)) config_error("epsilon must be positive");
  if (z_ub && !z_ub->allFinite()) config_error("z_ub must be finite");
}

// --------------------------------------------------------------- Generators

int GeneratorConfig::nodes() const { return std::accumulate(group_sizes.begin(), group_sizes.end(), 0); }

void GeneratorConfig::validate() const {
  const auto g = static_cast<Eigen::Index>(group_sizes.size());
  if (g == 0) config_error("at least one group is required");
  for (int s : group_sizes) {
    if (s <= 0) config_error("group sizes must be positive");
  }
  if (q_con.rows() != g || q_con.cols() != g) config_error("q_con must be G x G");
  if (l_gr.rows() != g || l_gr.cols() != g) config_error("l_gr must be G x G");
  for (Eigen::Index a = 0; a < g; ++a) {
    for (Eigen::Index b = 0; b < g; ++b) {
      if (!is_probability(q_con(a, b))) config_error("q_con entries must lie in [0, 1]");
      if (!(l_gr(a, b) >= 0.0) || !std::isfinite(l_gr(a, b))) config_error("l_gr entries must be finite and >= 0");
    }
  }
  if (variant.is_rv() && !(variant.alpha > 0.0 && variant.alpha <= 1.0 && variant.beta > 0.0 &&
                           variant.beta <= 1.0)) {
    config_error("alpha and beta must lie in (0, 1]");
  }
  std::visit(
      [g](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if (!(m.rho >= 0.0 && m.rho < 1.0)) config_error("rho must lie in [0, 1)");
        if constexpr (std::is_same_v<T, GaussianCashFlow>) {
          if (m.nu.size() != g) config_error("nu needs one entry per group");
          if (!(m.sigma > 0.0)) config_error("sigma must be positive");
        } else {
          if (m.kappa.size() != g || m.theta.size() != g) config_error("kappa and theta need one entry per group");
          if (!(m.kappa.minCoeff() > 0.0) || !(m.theta.minCoeff() > 0.0)) {
            config_error("kappa and theta must be positive");
          }
        }
      },
      cash_flow);
}

FinancialNetwork generate_network(const GeneratorConfig& cfg) {
  cfg.validate();
  const int n = cfg.nodes();
  const Grouping grouping = cfg.grouping();
  Matrix l(n, n);
  for (int attempt = 0; attempt < kMaxNetworkAttempts; ++attempt) {
    l.setZero();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int a = grouping.group_of(i);
        const int b = grouping.group_of(j);
        Stream edge(cfg.seed, static_cast<std::uint64_t>(StreamDomain::Edge),
                    static_cast<std::uint64_t>(attempt), static_cast<std::uint64_t>(i),
                    static_cast<std::uint64_t>(j));
        if (edge.uniform() < cfg.q_con(a, b)) l(i, j) = cfg.l_gr(a, b);
      }
    }
    try {
      return FinancialNetwork::from_liabilities(l, cfg.variant);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroObligationRow && e.kind() != ErrorKind::ColumnSumViolation) throw;
    }
  }
  throw Error(ErrorKind::GenerationExhausted,
              "no valid network after " + std::to_string(kMaxNetworkAttempts) + " attempts");
}

ScenarioSet generate_scenarios(const GeneratorConfig& cfg, int k) {
  cfg.validate();
  if (k <= 0) config_error("scenario count must be positive");
  const int n = cfg.nodes();
  const Grouping grouping = cfg.grouping();
  const double rho = std::visit([](const auto& m) { return m.rho; }, cfg.cash_flow);
  // Square root of (1 - rho) I + rho 11^T: a I + c 11^T.
  const double a = std::sqrt(1.0 - rho);
  const double c = (std::sqrt(1.0 + (n - 1) * rho) - a) / n;

  Matrix x(k, n);
  Vector z(n);
  for (int row = 0; row < k; ++row) {
    for (int i = 0; i < n; ++i) {
      Stream cell(cfg.seed, static_cast<std::uint64_t>(StreamDomain::CashFlow),
                  static_cast<std::uint64_t>(row), static_cast<std::uint64_t>(i));
      z(i) = cell.normal();
    }
    const double common = c * z.sum();
    for (int i = 0; i < n; ++i) {
      const double y = a * z(i) + common;
      const int g = grouping.group_of(i);
      if (const auto* gauss = std::get_if<GaussianCashFlow>(&cfg.cash_flow)) {
        x(row, i) = gauss->nu(g) + gauss->sigma * y;
      } else {
        const auto& gam = std::get<GammaCopulaCashFlow>(cfg.cash_flow);
        const double u = std::clamp(normal_cdf(y), 1e-300, 1.0 - 0x1.0p-53);
        x(row, i) = gamma_quantile(u, gam.kappa(g), gam.theta(g));
      }
    }
  }
  return ScenarioSet::uniform(std::move(x));
}

// --------------------------------------------------------------- Membership

void check_consistent(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping) {
  if (scen.nodes() != net.size() || grouping.nodes() != net.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "network has " + std::to_string(net.size()) + " nodes, scenarios " +
                    std::to_string(scen.nodes()) + ", grouping " + std::to_string(grouping.nodes()));
  }
}

double expected_aggregate(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
                          const Vector& z, const Vector& weights, milp::Backend* backend) {
  check_consistent(net, scen, grouping);
  const Vector capital = grouping.spread(z);
  if (net.variant().is_rv()) {
    for (int k = 0; k < scen.size(); ++k) {
      if (((scen.x().row(k).transpose() + capital).array() < 0.0).any()) return kUndefinedAggregate;
    }
  }
  double total = 0.0;
  for (int k = 0; k < scen.size(); ++k) {
    const Vector x = scen.cash_flow(k) + capital;
    total += scen.q()(k) * aggregate(net, x, weights, backend);
  }
  return total;
}

bool member(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping, double gamma,
            const Vector& z, milp::Backend* backend) {
  return expected_aggregate(net, scen, grouping, z, {}, backend) >= gamma - kMembershipTol;
}

bool member(const FinancialNetwork& net, const ScenarioSet& scen, const Grouping& grouping,
            const RiskSpec& spec, const Vector& z, milp::Backend* backend) {
  return member(net, scen, grouping, spec.gamma(net), z, backend);
}

}  // namespace netrisk
