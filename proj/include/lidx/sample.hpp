#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lidx/distributions.hpp"

namespace lidx {

/// The sorted key array A_n together with the distribution and seed that
/// produced it. Ties are allowed.
class KeySample {
 public:
  /// Sorts `keys`. Throws std::domain_error if empty or if a key falls
  /// outside the source support.
  KeySample(std::vector<double> keys, CdfModel source, std::uint64_t seed = 0);

  std::span<const double> keys() const noexcept { return keys_; }
  std::size_t size() const noexcept { return keys_.size(); }
  double operator[](std::size_t i) const noexcept { return keys_[i]; }
  std::uint64_t seed() const noexcept { return seed_; }
  const CdfModel& source() const noexcept { return source_; }
  Interval support() const noexcept { return source_.support(); }

  /// #{keys <= q}.
  std::size_t rank(double q) const noexcept;
  /// #{keys < q}.
  std::size_t rank_left(double q) const noexcept;

 private:
  std::vector<double> keys_;
  CdfModel source_;
  std::uint64_t seed_;
};

/// n i.i.d. keys by inverse-transform sampling from a CounterRng seeded with
/// `seed`, stored sorted. Throws std::domain_error for n == 0.
KeySample sample_iid(const CdfModel& model, std::size_t n, std::uint64_t seed);

}  // namespace lidx
