#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lidx/distributions.hpp"

namespace lidx::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are computed once per order and cached. Orders 1..64.
const GaussRule& gauss_legendre(std::size_t order);

/// Sorted cut points of `dom` split into `panels` equal panels and refined
/// by every cut strictly inside the interval. Always starts at dom.lo and
/// ends at dom.hi.
std::vector<double> partition(Interval dom, std::size_t panels,
                              std::span<const std::vector<double>* const> cuts);

template <class F>
double integrate(F&& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    s += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return s * half;
}

/// Pairwise summation; the result depends only on the order of `v`.
double pairwise_sum(std::span<const double> v);

}  // namespace lidx::quad
