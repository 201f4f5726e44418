#pragma once

#include <cstdint>
#include <limits>

namespace lidx {

/// SplitMix64 written in counter form: output k is mix(seed + (k + 1) * phi)
/// where phi = 0x9E3779B97F4A7C15. Every output is a pure function of
/// (seed, k), so streams are reproducible on any platform and can be
/// indexed directly.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  result_type at(std::uint64_t k) const noexcept {
    return mix(seed_ + (k + 1) * 0x9E3779B97F4A7C15ULL);
  }

  result_type operator()() noexcept { return at(counter_++); }

  /// Uniform double in the open interval (0, 1) with 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace lidx
