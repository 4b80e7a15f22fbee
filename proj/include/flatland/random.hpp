#pragma once

#include <cstdint>
#include <limits>

#include "flatland/rational.hpp"

namespace flatland {

/// Counter-based, splittable 64-bit generator.
///
/// Output i of a stream with key k is mix(k + (i + 1)·γ), where mix is the
/// SplitMix64 finalizer and γ = 0x9e3779b97f4a7c15. A child stream's key is
/// mix(k ^ mix(index + γ)). Everything is defined by integer arithmetic, so
/// draw sequences are identical on every platform and standard library;
/// bounded draws go through uniform_below() rather than <random>
/// distributions for the same reason.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix(key_ + (++counter_) * kGamma); }

  /// Independent substream; does not advance this generator.
  CounterRng split(std::uint64_t index) const noexcept {
    CounterRng child;
    child.key_ = mix(key_ ^ mix(index + kGamma));
    return child;
  }

  /// Uniform on [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    // Rejection on the top partial block keeps the draw unbiased.
    const std::uint64_t limit = max() - (max() % bound + 1) % bound;
    std::uint64_t v;
    do {
      v = (*this)();
    } while (v > limit);
    return v % bound;
  }

  /// Uniform on [0, bound) for unbounded integers. bound must be positive.
  BigInt uniform_below(const BigInt& bound) {
    if (bound <= BigInt(max())) return uniform_below(bound.convert_to<std::uint64_t>());
    const unsigned bits = boost::multiprecision::msb(bound) + 1;
    for (;;) {
      BigInt v = 0;
      unsigned have = 0;
      while (have < bits) {
        v = (v << 64) | BigInt((*this)());
        have += 64;
      }
      v >>= (have - bits);
      if (v < bound) return v;
    }
  }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  CounterRng() = default;

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace flatland
