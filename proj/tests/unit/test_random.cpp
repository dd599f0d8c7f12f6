#include "netrisk/random.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <doctest.h>

#include <cmath>

using namespace netrisk;

TEST_CASE("splitmix64 reference values") {
  // First outputs of the reference generator seeded with 0.
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xe220a8397b1dcdafULL);
  state += 0x9e3779b97f4a7c15ULL;
  CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("streams are reproducible and independent of each other") {
  Stream a(7, 1, 2, 3, 4);
  Stream b(7, 1, 2, 3, 4);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Stream c(7, 1, 2, 3, 5);
  Stream d(7, 1, 2, 3, 4);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += c.next_u64() == d.next_u64();
  CHECK(same == 0);
}

TEST_CASE("uniform draws stay in the open unit interval with the right moments") {
  Stream s(1, 2);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - sum * sum / n / n - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("normal draws have zero mean and unit variance") {
  Stream s(3, 2);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-3.0) == doctest::Approx(0.0013498980316300946).epsilon(1e-12));
  CHECK(normal_cdf(-40.0) >= 0.0);
}

TEST_CASE("gamma quantile inverts the distribution function") {
  const double shapes[] = {0.5, 1.0, 4.0, 64.0, 100.0};
  const double us[] = {1e-12, 1e-4, 0.05, 0.5, 0.95, 1 - 1e-9};
  for (double k : shapes) {
    boost::math::gamma_distribution<double> dist(k, 1.25);
    for (double u : us) {
      const double q = gamma_quantile(u, k, 1.25);
      CHECK(q == doctest::Approx(boost::math::quantile(dist, u)).epsilon(1e-8));
    }
  }
  CHECK_THROWS((void)gamma_quantile(0.0, 1.0, 1.0));
  CHECK_THROWS((void)gamma_quantile(0.5, -1.0, 1.0));
}
