#pragma once

#include <array>
#include <cstddef>

#include "lidx/measure.hpp"
#include "lidx/target.hpp"

namespace lidx::detail {

/// h(x) = value + slope * (x - center).
struct AffineFit {
  double value = 0.0;
  double slope = 0.0;
  double center = 0.0;
  double error = 0.0;
};

/// Nelder-Mead on (value, slope) starting at `start` with initial steps
/// `step`. Stops when the simplex is within `tol` of its best vertex in
/// step-normalised coordinates.
AffineFit nelder_mead_affine(const Target& target, Interval iv, const Measure& mu,
                             std::size_t panels, AffineFit start, std::array<double, 2> step,
                             double tol);

}  // namespace lidx::detail
