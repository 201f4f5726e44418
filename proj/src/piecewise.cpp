#include "lidx/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lidx {

PiecewiseModel::PiecewiseModel(std::vector<double> breakpoints, std::vector<Segment> segments)
    : breaks_(std::move(breakpoints)), segments_(std::move(segments)) {
  if (segments_.empty()) throw std::domain_error("PiecewiseModel: need K >= 1 segments");
  if (breaks_.size() != segments_.size() + 1)
    throw std::domain_error("PiecewiseModel: need K + 1 breakpoints for K segments");
  for (std::size_t k = 0; k < breaks_.size(); ++k) {
    if (!std::isfinite(breaks_[k]))
      throw std::domain_error("PiecewiseModel: breakpoints must be finite");
    if (k > 0 && !(breaks_[k] > breaks_[k - 1]))
      throw std::domain_error("PiecewiseModel: breakpoints must be strictly increasing");
  }
}

std::size_t PiecewiseModel::locate(double q, std::size_t& comparisons) const noexcept {
  // upper_bound over the interior breakpoints b_1 .. b_{K-1}.
  std::size_t first = 1;
  std::size_t count = breaks_.size() - 2;
  while (count > 0) {
    const std::size_t step = count / 2;
    ++comparisons;
    if (!(q < breaks_[first + step])) {
      first += step + 1;
      count -= step + 1;
    } else {
      count = step;
    }
  }
  return first - 1;
}

std::size_t PiecewiseModel::locate(double q) const noexcept {
  std::size_t unused = 0;
  return locate(q, unused);
}

double PiecewiseModel::left(double q) const noexcept {
  // Segment k with b_{k-1} < q <= b_k.
  const auto inner = std::span<const double>(breaks_).subspan(1, breaks_.size() - 2);
  const auto k = static_cast<std::size_t>(std::lower_bound(inner.begin(), inner.end(), q) -
                                          inner.begin());
  return segments_[k](q);
}

PiecewiseModel PiecewiseModel::scaled(double factor) const {
  std::vector<Segment> s(segments_);
  for (auto& seg : s) {
    seg.slope *= factor;
    seg.intercept *= factor;
  }
  return PiecewiseModel(breaks_, std::move(s));
}

}  // namespace lidx
