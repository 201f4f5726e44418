#include "lidx/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lidx::quad {
namespace {

GaussRule build_rule(std::size_t n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n == 1) {
    r.nodes[0] = 0.0;
    r.weights[0] = 2.0;
  }
  std::reverse(r.nodes.begin(), r.nodes.end());
  std::reverse(r.weights.begin(), r.weights.end());
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t order) {
  static std::array<GaussRule, 65> cache;
  static std::array<std::once_flag, 65> flags;
  if (order < 1 || order > 64) throw std::domain_error("gauss_legendre: order must be 1..64");
  std::call_once(flags[order], [order] { cache[order] = build_rule(order); });
  return cache[order];
}

std::vector<double> partition(Interval dom, std::size_t panels,
                              std::span<const std::vector<double>* const> cuts) {
  if (panels == 0) throw std::domain_error("partition: need at least one panel");
  std::vector<double> x;
  std::size_t extra = 0;
  for (const auto* c : cuts) extra += c->size();
  x.reserve(panels + 1 + extra);
  const double h = dom.length() / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) x.push_back(dom.lo + h * static_cast<double>(i));
  x.push_back(dom.hi);
  for (const auto* c : cuts)
    for (double v : *c)
      if (v > dom.lo && v < dom.hi) x.push_back(v);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double e : v) s += e;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace lidx::quad
