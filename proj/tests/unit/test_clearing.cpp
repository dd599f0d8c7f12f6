#include "netrisk/clearing.hpp"
#include "netrisk/errors.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <random>

using namespace netrisk;
using fixtures::vec;

namespace {

const Variant kRv = Variant::rogers_veraart(0.5, 0.5);

double inf_dist(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

Vector random_box_point(const FinancialNetwork& net, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector p(net.size());
  for (int i = 0; i < net.size(); ++i) p(i) = u(rng) * net.pbar()(i);
  return p;
}

}  // namespace

TEST_CASE("signed clearing map examples") {
  const auto unit = fixtures::unit_cycle();
  CHECK(phi_en_signed(unit, vec({-5, -5}), vec({1, 1})) == vec({0, 0}));
  CHECK(phi_en_signed(unit, vec({0, 0}), vec({1, 1})) == vec({1, 1}));
  const auto net = fixtures::two_node(Variant::signed_en());
  const Vector p = vec({20, 15});
  const Vector x = vec({10, 10});
  CHECK(phi_en_signed(net, x, p) == vec({20, 25}));
  CHECK(phi_en_signed(net, x, p) == oracle::brute_phi(net, x, p));
}

TEST_CASE("signed clearing map pays nothing at a zero net position") {
  const auto unit = fixtures::unit_cycle();
  CHECK(phi_en_signed(unit, vec({-0.5, 0}), vec({1, 0.5})) == vec({0, 1}));
}

TEST_CASE("Rogers-Veraart clearing map examples") {
  const auto net = fixtures::two_node(kRv);
  const Vector x = vec({10, 10});
  const Vector out = phi_rv(net, x, vec({20, 15}));
  CHECK(out(1) == 25.0);
  CHECK(phi_rv(net, x, vec({20, 25})) == vec({20, 25}));
  CHECK_THROWS_AS((void)phi_rv(net, vec({-1, 10}), vec({0, 0})), Error);
  CHECK_THROWS_AS((void)phi(net, vec({1, 2, 3}), vec({0, 0})), Error);
}

TEST_CASE("Rogers-Veraart with full recovery equals the signed map on nonnegative flows") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    const auto en = fixtures::random_network(n, rng, Variant::signed_en());
    const auto rv = en.with_variant(Variant::rogers_veraart(1.0, 1.0));
    const Vector x = fixtures::random_cash_flow(n, rng, true);
    const Vector p = random_box_point(en, rng);
    CHECK(inf_dist(phi_rv(rv, x, p), phi_en_signed(en, x, p)) <= 1e-12);
  }
}

TEST_CASE("clearing maps agree with the loop evaluator, are monotone and stay in the box") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + trial % 7;
    const bool rv = trial % 2 == 1;
    const auto net = fixtures::random_network(n, rng, rv ? Variant::rogers_veraart(0.3, 0.7) : Variant::signed_en());
    const Vector x = fixtures::random_cash_flow(n, rng, rv);
    const Vector p = random_box_point(net, rng);
    Vector q = p;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) q(i) = p(i) + u(rng) * (net.pbar()(i) - p(i));
    const Vector fp = phi(net, x, p);
    const Vector fq = phi(net, x, q);
    CHECK(inf_dist(fp, oracle::brute_phi(net, x, p)) <= 1e-12);
    CHECK(((fq - fp).array() >= -1e-12).all());
    CHECK((fp.array() >= 0.0).all());
    CHECK(((net.pbar() - fp).array() >= 0.0).all());
  }
}

TEST_CASE("Picard iteration examples") {
  CHECK(picard_clearing(fixtures::unit_cycle(), vec({-5, -5})) == vec({0, 0}));
  const auto net = fixtures::two_node(kRv);
  CHECK(picard_clearing(net, vec({10, 10})) == vec({20, 25}));
  const Vector zero = picard_clearing(net, vec({0, 0}));
  CHECK(zero.cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(fixed_point_residual(net, vec({0, 0}), zero) <= 1e-10);
}

TEST_CASE("Picard iteration reports non-convergence") {
  PicardOptions opts;
  opts.max_iter = 3;
  try {
    (void)picard_clearing(fixtures::two_node(kRv), vec({0, 0}), opts);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("signed clearing MILP examples") {
  const auto unit = fixtures::unit_cycle();
  const auto full = clearing_milp_en(unit, vec({0, 0}));
  CHECK(full.aggregate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(inf_dist(full.p, vec({1, 1})) <= 1e-9);
  const auto none = clearing_milp_en(unit, vec({-5, -5}));
  CHECK(std::abs(none.aggregate) <= 1e-9);
  CHECK(inf_dist(none.p, vec({0, 0})) <= 1e-9);
}

TEST_CASE("Rogers-Veraart clearing MILP examples") {
  const auto net = fixtures::two_node(kRv);
  const auto paid = clearing_milp_rv(net, vec({10, 10}));
  CHECK(inf_dist(paid.p, vec({20, 25})) <= 1e-9);
  CHECK(paid.aggregate == doctest::Approx(45.0).epsilon(1e-12));
  const auto zero = clearing_milp_rv(net, vec({0, 0}));
  CHECK(std::abs(zero.aggregate) <= 1e-9);
  CHECK(clearing_milp_rv(net, vec({-1, 10})).aggregate == kUndefinedAggregate);
  CHECK(aggregate(net, vec({-1, 10})) == kUndefinedAggregate);
}

TEST_CASE("clearing MILP matches the Picard limit on random networks") {
  std::mt19937_64 rng(17);
  const double params[] = {0.3, 0.7, 1.0};
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + trial % 7;
    const bool rv = trial % 2 == 1;
    const Variant v = rv ? Variant::rogers_veraart(params[trial % 3], params[(trial / 3) % 3]) : Variant::signed_en();
    const auto net = fixtures::random_network(n, rng, v);
    const Vector x = fixtures::random_cash_flow(n, rng, rv);
    const auto r = clear(net, x);
    const Vector oracle_p = picard_clearing(net, x);
    CHECK(inf_dist(r.p, oracle_p) <= 1e-6);
    CHECK(r.residual <= kFixedPointTol);
    CHECK(r.aggregate == doctest::Approx(r.p.sum()).epsilon(1e-12));
    CHECK(verify_clearing(net, x, r.p, 1e-6).all_pass());
  }
}

TEST_CASE("clearing MILP honours weights") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 4;
    const auto net = fixtures::random_network(n, rng, Variant::signed_en());
    const Vector x = fixtures::random_cash_flow(n, rng, false);
    Vector w(n);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (int i = 0; i < n; ++i) w(i) = u(rng);
    const auto r = clear(net, x, w);
    CHECK(inf_dist(r.p, picard_clearing(net, x)) <= 1e-6);
    CHECK(r.aggregate == doctest::Approx(w.dot(r.p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)clear(fixtures::unit_cycle(), vec({0, 0}), vec({1, 0})), Error);
  CHECK_THROWS_AS((void)clear(fixtures::unit_cycle(), vec({0, 0}), vec({1, 1, 1})), Error);
}

TEST_CASE("axioms accept a clearing vector that is not a fixed point") {
  const auto net = fixtures::two_node(kRv);
  const Vector x = vec({10, 10});
  const Vector p = vec({20, 15});
  CHECK(verify_clearing(net, x, p).all_pass());
  CHECK(fixed_point_residual(net, x, p) == doctest::Approx(10.0));
}

TEST_CASE("axioms hold at Picard limits and fail off them") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    const auto net = fixtures::random_network(n, rng, Variant::signed_en());
    const Vector x = fixtures::random_cash_flow(n, rng, false);
    CHECK(verify_clearing(net, x, picard_clearing(net, x)).all_pass());
  }
  const auto unit = fixtures::unit_cycle();
  const auto report = verify_clearing(unit, vec({-5, -5}), vec({0.5, 0}));
  CHECK_FALSE(report.all_pass());
  CHECK_FALSE(report.nodes[0].immediate_default);
  CHECK_FALSE(verify_clearing(unit, vec({0, 0}), vec({0.5, 1})).all_pass());
}

TEST_CASE("stored non-concavity witnesses still violate concavity") {
  std::ifstream in(std::string(NETRISK_FIXTURE_DIR) + "/nonconcavity.json");
  REQUIRE(in.good());
  const auto doc = nlohmann::json::parse(in);
  REQUIRE(doc.at("witnesses").size() == 2);
  for (const auto& w : doc.at("witnesses")) {
    Matrix l = Matrix::Zero(static_cast<Eigen::Index>(w.at("liabilities").size()),
                            static_cast<Eigen::Index>(w.at("liabilities").size()));
    for (std::size_t i = 0; i < w.at("liabilities").size(); ++i) {
      for (std::size_t j = 0; j < w.at("liabilities")[i].size(); ++j) {
        l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w.at("liabilities")[i][j].get<double>();
      }
    }
    const Variant v = w.at("model") == "en" ? Variant::signed_en()
                                            : Variant::rogers_veraart(w.at("alpha").get<double>(), w.at("beta").get<double>());
    const auto net = FinancialNetwork::from_liabilities(l, v);
    auto read = [](const nlohmann::json& a) {
      Vector out(static_cast<Eigen::Index>(a.size()));
      for (std::size_t i = 0; i < a.size(); ++i) out(static_cast<Eigen::Index>(i)) = a[i].get<double>();
      return out;
    };
    const Vector x1 = read(w.at("x1"));
    const Vector x2 = read(w.at("x2"));
    const double mid = aggregate(net, (0.5 * (x1 + x2)).eval());
    const double chord = 0.5 * (aggregate(net, x1) + aggregate(net, x2));
    CHECK(mid < chord - 1e-6);
    // The same inequality with the Picard oracle in place of the MILP.
    const double mid_ref = picard_clearing(net, (0.5 * (x1 + x2)).eval()).sum();
    const double chord_ref = 0.5 * (picard_clearing(net, x1).sum() + picard_clearing(net, x2).sum());
    CHECK(mid_ref < chord_ref - 1e-6);
  }
}
