#include "netrisk/clearing.hpp"
#include "netrisk/errors.hpp"
#include "netrisk/scenarios.hpp"
#include "support/instances.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace netrisk;
using fixtures::vec;

namespace {

GeneratorConfig two_group_config() {
  GeneratorConfig cfg;
  cfg.group_sizes = {15, 35};
  cfg.q_con.resize(2, 2);
  cfg.q_con << 0.9, 0.3, 0.7, 0.5;
  cfg.l_gr.resize(2, 2);
  cfg.l_gr << 10, 5, 8, 5;
  cfg.cash_flow = GaussianCashFlow{vec({-50, -100}), 100.0, 0.05};
  cfg.seed = 1;
  return cfg;
}

GeneratorConfig complete_config(double c) {
  GeneratorConfig cfg;
  cfg.group_sizes = {3};
  cfg.q_con = Matrix::Ones(1, 1);
  cfg.l_gr = Matrix::Constant(1, 1, c);
  cfg.cash_flow = GaussianCashFlow{vec({1.0}), 1.0, 0.0};
  return cfg;
}

}  // namespace

TEST_CASE("grouping from sizes and assignments") {
  const auto g = Grouping::from_sizes({2, 1});
  CHECK(g.groups() == 2);
  CHECK(g.nodes() == 3);
  CHECK(g.assignment() == std::vector<int>{0, 0, 1});
  const Matrix b = g.matrix();
  for (int i = 0; i < 3; ++i) CHECK(b.col(i).sum() == 1.0);
  CHECK(g.spread(vec({5, 7})) == vec({5, 5, 7}));
  const auto h = Grouping::from_assignment({1, 0, 1});
  CHECK(h.sizes() == std::vector<int>{1, 2});
  CHECK_THROWS_AS((void)Grouping::from_assignment({0, 2}), Error);
  CHECK_THROWS_AS((void)Grouping::from_assignment({0, 0}, 2), Error);
  CHECK_THROWS_AS((void)Grouping::from_sizes({2, 0}), Error);
}

TEST_CASE("scenario sets check their probabilities") {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  CHECK_NOTHROW((void)ScenarioSet::create(x, vec({0.25, 0.75})));
  CHECK_THROWS_AS((void)ScenarioSet::create(x, vec({0.5, 0.6})), Error);
  CHECK_THROWS_AS((void)ScenarioSet::create(x, vec({0.0, 1.0})), Error);
  CHECK_THROWS_AS((void)ScenarioSet::create(x, vec({1.0})), Error);
  CHECK(ScenarioSet::uniform(x).max_abs() == 4.0);
}

TEST_CASE("collapsing merges identical scenarios") {
  Matrix x(4, 2);
  x << 1, 2, 3, 4, 1, 2, 5, 6;
  const auto c = ScenarioSet::uniform(x).collapsed();
  REQUIRE(c.size() == 3);
  CHECK(c.q() == vec({0.5, 0.25, 0.25}));
  CHECK(c.cash_flow(2) == vec({5, 6}));
}

TEST_CASE("risk spec validation") {
  RiskSpec s;
  s.gamma_p = 0.7;
  CHECK_NOTHROW(s.validate());
  s.gamma_p = 1.2;
  CHECK_THROWS_AS(s.validate(), Error);
  s.gamma_p = 0.5;
  s.epsilon = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s.epsilon = 0.1;
  CHECK(s.gamma(fixtures::two_node(Variant::signed_en())) == doctest::Approx(22.5));
}

TEST_CASE("complete graph from probability-one edges") {
  const auto net = generate_network(complete_config(4.0));
  CHECK(net.pbar() == vec({8, 8, 8}));
}

TEST_CASE("probability-zero edges exhaust the generator") {
  auto cfg = complete_config(4.0);
  cfg.q_con.setZero();
  try {
    (void)generate_network(cfg);
    FAIL("expected GenerationExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GenerationExhausted);
  }
}

TEST_CASE("generator configuration is validated") {
  auto cfg = two_group_config();
  cfg.q_con(0, 1) = 1.5;
  CHECK_THROWS_AS((void)generate_network(cfg), Error);
  cfg = two_group_config();
  cfg.cash_flow = GaussianCashFlow{vec({0, 0}), 0.0, 0.0};
  CHECK_THROWS_AS((void)generate_scenarios(cfg, 3), Error);
  cfg.cash_flow = GaussianCashFlow{vec({0, 0}), 1.0, 1.0};
  CHECK_THROWS_AS((void)generate_scenarios(cfg, 3), Error);
  cfg.cash_flow = GammaCopulaCashFlow{vec({1, -1}), vec({1, 1}), 0.1};
  CHECK_THROWS_AS((void)generate_scenarios(cfg, 3), Error);
}

TEST_CASE("edge frequencies fall inside the binomial band") {
  auto cfg = two_group_config();
  Matrix edges = Matrix::Zero(2, 2);
  Matrix trials = Matrix::Zero(2, 2);
  const auto grouping = cfg.grouping();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const Matrix l = generate_network(cfg).liabilities();
    for (int i = 0; i < l.rows(); ++i) {
      for (int j = 0; j < l.cols(); ++j) {
        if (i == j) continue;
        const int a = grouping.group_of(i), b = grouping.group_of(j);
        trials(a, b) += 1;
        edges(a, b) += l(i, j) > 0 ? 1 : 0;
      }
    }
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double q = cfg.q_con(a, b);
      const double sd = std::sqrt(trials(a, b) * q * (1 - q));
      CHECK(std::abs(edges(a, b) - trials(a, b) * q) <= 3 * sd);
    }
  }
}

TEST_CASE("generators are deterministic and K-prefix stable") {
  auto cfg = two_group_config();
  cfg.seed = 42;
  CHECK(generate_network(cfg).liabilities() == generate_network(cfg).liabilities());
  const auto a = generate_scenarios(cfg, 5);
  const auto b = generate_scenarios(cfg, 9);
  CHECK(a.x() == generate_scenarios(cfg, 5).x());
  CHECK(a.x() == b.x().topRows(5));
  cfg.seed = 43;
  CHECK(a.x() != generate_scenarios(cfg, 5).x());
}

TEST_CASE("near-zero variance reproduces the group means") {
  auto cfg = two_group_config();
  cfg.cash_flow = GaussianCashFlow{vec({-50, -100}), 1e-12, 0.05};
  const auto s = generate_scenarios(cfg, 20);
  const auto grouping = cfg.grouping();
  for (int k = 0; k < s.size(); ++k) {
    for (int i = 0; i < s.nodes(); ++i) CHECK(std::abs(s.x()(k, i) - (grouping.group_of(i) == 0 ? -50 : -100)) < 1e-9);
  }
  CHECK(s.q().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gamma copula draws are nonnegative") {
  GeneratorConfig cfg;
  cfg.group_sizes = {3, 4};
  cfg.q_con = Matrix::Constant(2, 2, 0.5);
  cfg.l_gr = Matrix::Constant(2, 2, 1.0);
  cfg.cash_flow = GammaCopulaCashFlow{vec({0.3, 64}), vec({2, 1.25}), 0.5};
  const auto s = generate_scenarios(cfg, 2000);
  CHECK(s.x().minCoeff() >= 0.0);
}

TEST_CASE("expected aggregate examples") {
  const auto unit = fixtures::unit_cycle();
  Matrix x(1, 2);
  x << -3, -3;
  const auto scen = ScenarioSet::uniform(x);
  const auto single = Grouping::single(2);
  CHECK(expected_aggregate(unit, scen, single, vec({3})) == doctest::Approx(2.0));

  const auto rv = fixtures::two_node(Variant::rogers_veraart(0.5, 0.5));
  Matrix xr(2, 2);
  xr << 10, 10, 1, 5;
  const auto scen_rv = ScenarioSet::uniform(xr);
  CHECK(expected_aggregate(rv, scen_rv, single, vec({-2})) == kUndefinedAggregate);
  CHECK_FALSE(member(rv, scen_rv, single, 0.0, vec({-2})));
}

TEST_CASE("expected aggregate matches scenario-wise Picard aggregation") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const bool rv = trial % 2 == 1;
    const auto inst = fixtures::random_instance(2 + trial % 5, 1 + trial % 4, 1 + trial % 2, rng,
                                                rv ? Variant::rogers_veraart(0.7, 0.3) : Variant::signed_en());
    Vector z(inst.grouping.groups());
    std::uniform_real_distribution<double> u(0.0, 40.0);
    for (int g = 0; g < z.size(); ++g) z(g) = u(rng);
    double expected = 0.0;
    const Vector cap = inst.grouping.spread(z);
    for (int k = 0; k < inst.scen.size(); ++k) {
      expected += inst.scen.q()(k) * picard_clearing(inst.net, (inst.scen.cash_flow(k) + cap).eval()).sum();
    }
    CHECK(std::abs(expected_aggregate(inst.net, inst.scen, inst.grouping, z) - expected) <= 1e-6);
  }
}

TEST_CASE("membership examples and upward closure") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = fixtures::random_instance(2 + trial % 4, 1 + trial % 3, 2, rng, Variant::signed_en());
    const double total = inst.net.total_obligations();
    const double big = inst.scen.max_abs() + inst.net.pbar().maxCoeff();
    CHECK(member(inst.net, inst.scen, inst.grouping, 0.0, Vector::Constant(2, big)));
    CHECK(member(inst.net, inst.scen, inst.grouping, total, Vector::Constant(2, big)));
    CHECK_FALSE(member(inst.net, inst.scen, inst.grouping, total + 1e-3, Vector::Constant(2, 1e6)));
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    const Vector z = vec({u(rng), u(rng)});
    const Vector dz = vec({std::abs(u(rng)), std::abs(u(rng))});
    const double lo = expected_aggregate(inst.net, inst.scen, inst.grouping, z);
    const double hi = expected_aggregate(inst.net, inst.scen, inst.grouping, (z + dz).eval());
    CHECK(hi >= lo - 1e-9);
    const double gamma = 0.6 * total;
    if (member(inst.net, inst.scen, inst.grouping, gamma, z)) {
      CHECK(member(inst.net, inst.scen, inst.grouping, gamma, (z + dz).eval()));
    }
  }
}

TEST_CASE("dimension checks") {
  Matrix x(1, 3);
  x << 1, 2, 3;
  CHECK_THROWS_AS(check_consistent(fixtures::unit_cycle(), ScenarioSet::uniform(x), Grouping::single(2)), Error);
}
