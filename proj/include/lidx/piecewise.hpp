#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lidx/distributions.hpp"

namespace lidx {

enum class ModelClass { P0, P1 };

/// One segment model: constant (P0) or affine (P1). Constants are stored as
/// affine with zero slope so evaluation is uniform.
struct Segment {
  ModelClass kind = ModelClass::P0;
  double slope = 0.0;
  double intercept = 0.0;

  static Segment constant(double c) { return {ModelClass::P0, 0.0, c}; }
  static Segment affine(double slope, double intercept) {
    return {ModelClass::P1, slope, intercept};
  }
  double operator()(double x) const noexcept { return intercept + slope * x; }
};

/// Piecewise predictor h(q) = sum_k segment_k(q) 1[b_{k-1} <= q < b_k], the
/// last interval closed. Queries outside [b_0, b_K] use the nearest segment.
class PiecewiseModel {
 public:
  /// Throws std::domain_error unless breakpoints are strictly increasing and
  /// there is exactly one segment per interval.
  PiecewiseModel(std::vector<double> breakpoints, std::vector<Segment> segments);

  std::size_t size() const noexcept { return segments_.size(); }
  Interval span() const noexcept { return {breaks_.front(), breaks_.back()}; }
  std::span<const double> breakpoints() const noexcept { return breaks_; }
  std::span<const Segment> segments() const noexcept { return segments_; }

  /// Index of the segment containing q (right-continuous convention).
  std::size_t locate(double q) const noexcept;
  /// Same, counting breakpoint comparisons made by the binary search.
  std::size_t locate(double q, std::size_t& comparisons) const noexcept;

  double operator()(double q) const noexcept { return segments_[locate(q)](q); }
  /// lim_{y -> q-} h(y).
  double left(double q) const noexcept;

  /// Every segment multiplied by `factor`.
  PiecewiseModel scaled(double factor) const;

 private:
  std::vector<double> breaks_;
  std::vector<Segment> segments_;
};

}  // namespace lidx
