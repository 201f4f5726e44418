#include "lidx/sample.hpp"

#include <algorithm>
#include <stdexcept>

#include "lidx/rng.hpp"

namespace lidx {

KeySample::KeySample(std::vector<double> keys, CdfModel source, std::uint64_t seed)
    : keys_(std::move(keys)), source_(std::move(source)), seed_(seed) {
  if (keys_.empty()) throw std::domain_error("KeySample: need at least one key");
  std::sort(keys_.begin(), keys_.end());
  const Interval s = source_.support();
  if (!s.contains(keys_.front()) || !s.contains(keys_.back()))
    throw std::domain_error("KeySample: keys outside the source support");
}

std::size_t KeySample::rank(double q) const noexcept {
  return static_cast<std::size_t>(std::upper_bound(keys_.begin(), keys_.end(), q) -
                                  keys_.begin());
}

std::size_t KeySample::rank_left(double q) const noexcept {
  return static_cast<std::size_t>(std::lower_bound(keys_.begin(), keys_.end(), q) -
                                  keys_.begin());
}

KeySample sample_iid(const CdfModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::domain_error("sample_iid: n must be positive");
  CounterRng rng(seed);
  std::vector<double> keys(n);
  for (auto& k : keys) k = model.inverse(rng.uniform());
  return KeySample(std::move(keys), model, seed);
}

}  // namespace lidx
