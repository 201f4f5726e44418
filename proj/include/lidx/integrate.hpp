#pragma once

#include <cstddef>

#include "lidx/measure.hpp"
#include "lidx/target.hpp"

namespace lidx {

/// Integral of |a - b| against mu over `dom`. The domain is cut into
/// `panels` equal panels and further at every kink of a, b and mu. Inside
/// each piece the sign changes of a - b are located by bisection, so every
/// integrand handed to the Gauss rule is smooth.
double integrate_abs_difference(const Target& a, const Target& b, const Measure& mu,
                                Interval dom, std::size_t panels);

}  // namespace lidx
