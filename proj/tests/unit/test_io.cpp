#include "netrisk/errors.hpp"
#include "netrisk/io.hpp"
#include "support/instances.hpp"

#include <doctest.h>

#include <filesystem>

using namespace netrisk;
using fixtures::vec;
using io::json;

TEST_CASE("number formatting") {
  CHECK(io::fmt_num(0.1) == "0.1");
  CHECK(io::fmt_num(1.0 / 3.0) == "0.333333333333");
  CHECK(io::fmt_num(1.0 / 3.0, 17) == "0.33333333333333331");
  CHECK(io::fmt_num(-INFINITY) == "-inf");
}

TEST_CASE("network JSON round trip") {
  const auto net = fixtures::two_node(Variant::rogers_veraart(0.5, 0.25));
  const json j = io::network_to_json(net);
  CHECK(j.at("n") == 2);
  CHECK(j.at("variant").at("rv").at("beta") == 0.25);
  const auto back = io::network_from_json(j);
  CHECK(back.liabilities() == net.liabilities());
  CHECK(back.variant() == net.variant());
  const auto en = io::network_from_json(json::parse(R"({"n":2,"variant":"en","liabilities":[[0,1],[1,0]]})"));
  CHECK_FALSE(en.variant().is_rv());
}

TEST_CASE("network JSON errors") {
  CHECK_THROWS_AS((void)io::network_from_json(json::parse(R"({"n":3,"liabilities":[[0,1],[1,0]]})")), Error);
  CHECK_THROWS_AS((void)io::network_from_json(json::parse(R"({"n":2})")), Error);
  CHECK_THROWS_AS((void)io::network_from_json(json::parse(R"({"n":2,"variant":"xx","liabilities":[[0,1],[1,0]]})")),
                  Error);
  try {
    (void)io::network_from_json(json::parse(R"({"n":2,"liabilities":[[0,0],[1,0]]})"));
    FAIL("expected ZeroObligationRow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroObligationRow);
  }
}

TEST_CASE("scenario CSV round trip keeps the exact doubles") {
  Matrix x(3, 2);
  x << 0.1, -2.5, 1.0 / 3.0, 7, 1e-17, -1e6;
  const auto s = ScenarioSet::uniform(x);
  const std::string text = io::scenarios_to_csv(s);
  CHECK(text.rfind("q,x1,x2\n", 0) == 0);
  const auto back = io::scenarios_from_csv(text);
  CHECK(back.x() == s.x());
  CHECK(back.q() == s.q());
  CHECK_THROWS_AS((void)io::scenarios_from_csv("x1,x2\n1,2\n"), Error);
  CHECK_THROWS_AS((void)io::scenarios_from_csv("q,x1\n0.5,1\n0.4,2\n"), Error);
}

TEST_CASE("cash flows from either CSV layout") {
  CHECK(io::cash_flows_from_csv("x1,x2\n1,2\n3,4\n").row(1) == vec({3, 4}).transpose());
  CHECK(io::cash_flows_from_csv("q,x1,x2\n1,5,6\n").row(0) == vec({5, 6}).transpose());
}

TEST_CASE("grouping JSON is one-based") {
  const auto g = io::grouping_from_json(json::parse(R"({"assignment":[2,1,2]})"));
  CHECK(g.assignment() == std::vector<int>{1, 0, 1});
  CHECK(io::grouping_to_json(g).at("assignment") == json::parse("[2,1,2]"));
  CHECK(io::grouping_from_json(json::parse(R"({"sizes":[1,2]})")).assignment() == std::vector<int>{0, 1, 1});
  CHECK_THROWS_AS((void)io::grouping_from_json(json::parse(R"({"assignment":[0,1]})")), Error);
  CHECK_THROWS_AS((void)io::grouping_from_json(json::parse(R"({})")), Error);
}

TEST_CASE("generator and spec JSON round trip") {
  GeneratorConfig cfg;
  cfg.group_sizes = {2, 3};
  cfg.q_con = Matrix::Constant(2, 2, 0.5);
  cfg.l_gr = Matrix::Constant(2, 2, 4.0);
  cfg.cash_flow = GammaCopulaCashFlow{vec({100, 64}), vec({1, 1.25}), 0.05};
  cfg.variant = Variant::rogers_veraart(0.3, 0.9);
  cfg.seed = 77;
  const auto back = io::generator_from_json(io::generator_to_json(cfg));
  CHECK(back.group_sizes == cfg.group_sizes);
  CHECK(back.q_con == cfg.q_con);
  CHECK(back.variant == cfg.variant);
  CHECK(back.seed == 77);
  CHECK(std::get<GammaCopulaCashFlow>(back.cash_flow).theta == vec({1, 1.25}));

  RiskSpec spec{0.7, 0.25, vec({1, 2})};
  const auto s = io::spec_from_json(io::spec_to_json(spec));
  CHECK(s.gamma_p == 0.7);
  CHECK(s.z_ub == vec({1, 2}));
  CHECK_FALSE(io::spec_from_json(json::parse(R"({"z_ub":"auto"})")).z_ub);
  CHECK_FALSE(io::parse_z_ub(" auto "));
  CHECK(*io::parse_z_ub("1.5,-2") == vec({1.5, -2}));
  CHECK_THROWS_AS((void)io::parse_vector("1,x"), Error);
}

TEST_CASE("clearing JSON marks undefined aggregates") {
  ClearingResult r;
  r.p = vec({0, 0});
  r.s = vec({0, 0});
  r.aggregate = -INFINITY;
  const json j = io::clearing_to_json(r);
  CHECK(j.at("aggregate").is_null());
  CHECK(j.at("defined") == false);
}

TEST_CASE("corner and polyline CSV layout") {
  ApproximationPair p;
  p.z_ub = vec({10, 10});
  p.inner_points = {vec({1, 3}), vec({3, 1})};
  p.outer = CornerSet{vec({0, 0}), {vec({0, 2}), vec({2, 0})}};
  CHECK(io::corners_csv(p) == "kind,g1,g2\ninner,1,3\ninner,3,1\nouter,0,2\nouter,2,0\n");
  const std::string poly = io::polyline_csv(p);
  CHECK(poly.rfind("set,order,g1,g2\n", 0) == 0);
  CHECK(poly.find("inner,") != std::string::npos);
  CHECK(poly.find("outer,") != std::string::npos);
}

TEST_CASE("write_file creates parent directories") {
  const auto dir = std::filesystem::temp_directory_path() / "netrisk_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_file(dir / "a.txt", "hello");
  CHECK(io::read_file(dir / "a.txt") == "hello");
  std::filesystem::remove_all(dir.parent_path());
  CHECK_THROWS_AS((void)io::read_file(dir / "missing.txt"), Error);
}
