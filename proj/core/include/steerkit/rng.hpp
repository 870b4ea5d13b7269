#pragma once

#include <cstdint>
#include <limits>

namespace steerkit {

/// Counter-based SplitMix64 stream: draw k of seed s is
/// mix64(s + (k + 1) * 0x9E3779B97F4A7C15). The u64 stream is identical on
/// every platform; uniform() and normal() use only IEEE arithmetic and libm.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return at(seed_, counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (two draws per call, second discarded).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter);

  /// Independent substream seed for index i (e.g. a sweep grid point).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

} // namespace steerkit
