#pragma once

#include <cstdint>
#include <random>

namespace qwalk {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream `stream` of master seed `seed`.
///
/// Streams are addressed by counter, so realization r always sees the same
/// sequence no matter which thread runs it or in which order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Random source used by every stochastic component.
///
/// Uniform draws are built from the top 53 bits of the engine output rather
/// than through std::uniform_real_distribution, so sequences are identical
/// across standard library implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  static RandomSource for_stream(std::uint64_t seed, std::uint64_t stream) {
    return RandomSource(stream_seed(seed, stream));
  }

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qwalk
