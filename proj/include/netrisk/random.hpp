#pragma once

#include <cstdint>

namespace netrisk {

/// SplitMix64 finalizer. Stateless mixing of a 64-bit counter.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream. A stream is identified by (seed, domain, a, b, c);
/// draws are splitmix64 of a running counter, so each stream is independent
/// of how many draws other streams consumed.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t a = 0, std::uint64_t b = 0,
         std::uint64_t c = 0) noexcept;

  [[nodiscard]] std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  [[nodiscard]] double uniform() noexcept;
  /// Standard normal via Box-Muller (both variates consumed in order).
  [[nodiscard]] double normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stream domains, kept stable so seeds reproduce across versions.
enum class StreamDomain : std::uint64_t { Edge = 1, CashFlow = 2 };

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double z);

/// Quantile of the gamma distribution with shape kappa and scale theta.
/// u must lie in (0, 1).
[[nodiscard]] double gamma_quantile(double u, double kappa, double theta);

}  // namespace netrisk
