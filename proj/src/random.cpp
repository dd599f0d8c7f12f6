#include "netrisk/random.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netrisk {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t part : {domain, a, b, c}) h = splitmix64(h ^ part);
  return h;
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b,
               std::uint64_t c) noexcept
    : key_(mix_key(seed, domain, a, b, c)) {}

std::uint64_t Stream::next_u64() noexcept { return splitmix64(key_ + kGolden * counter_++); }

double Stream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double gamma_quantile(double u, double kappa, double theta) {
  if (!(u > 0.0 && u < 1.0) || !(kappa > 0.0) || !(theta > 0.0)) {
    throw std::domain_error("gamma_quantile: need u in (0,1), kappa > 0, theta > 0");
  }
  namespace bm = boost::math;
  // Bracket the standardized quantile y with P(kappa, lo) <= u <= P(kappa, hi).
  double lo = 0.0;
  double hi = std::max(1.0, kappa);
  while (bm::gamma_p(kappa, hi) < u) {
    lo = hi;
    hi *= 2.0;
  }
  double y = std::clamp(kappa, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = bm::gamma_p(kappa, y) - u;
    if (f < 0.0) {
      lo = y;
    } else {
      hi = y;
    }
    const double d = bm::gamma_p_derivative(kappa, y);
    double next = d > 0.0 ? y - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - y);
    y = next;
    if (step <= 1e-10 * std::max(1.0, y) || hi - lo <= 1e-10 * std::max(1.0, y)) break;
  }
  return theta * y;
}

}  // namespace netrisk
