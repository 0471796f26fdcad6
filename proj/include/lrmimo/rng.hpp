#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace lrmimo::rng {

/// SplitMix64-style mixing of a base seed with a stream index. Used to derive
/// independent per-trial (and per-purpose) seeds so parallel Monte-Carlo
/// trials are reproducible regardless of scheduling.
constexpr std::uint64_t mix(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }

  /// Circularly-symmetric complex normal with unit variance
  /// (independent real/imag parts of variance 1/2).
  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

 private:
  static constexpr double kInvSqrt2 = 0.7071067811865475244;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace lrmimo::rng
