#include "lidx/integrate.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "lidx/quadrature.hpp"

namespace lidx {
namespace {

constexpr std::size_t kSamples = 4;
constexpr std::size_t kOrder = 8;

double root(const Target& a, const Target& b, double lo, double hi, bool lo_positive) {
  for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (((a(mid) - b(mid)) > 0.0) == lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double integrate_abs_difference(const Target& a, const Target& b, const Measure& mu,
                                Interval dom, std::size_t panels) {
  const std::array<const std::vector<double>*, 3> cuts{&a.kinks(), &b.kinks(), &mu.kinks};
  const std::vector<double> xs = quad::partition(dom, panels, cuts);
  const quad::GaussRule& rule = quad::gauss_legendre(kOrder);

  auto piece = [&](double lo, double hi) {
    return quad::integrate(
        [&](double x) { return std::abs(a(x) - b(x)) * mu.density(x); }, lo, hi, rule);
  };

  std::vector<double> sums;
  sums.reserve(xs.size());
  std::array<double, kSamples + 1> t{};
  std::array<double, kSamples + 1> d{};
  for (std::size_t p = 0; p + 1 < xs.size(); ++p) {
    const double x0 = xs[p];
    const double x1 = xs[p + 1];
    if (!(x1 > x0)) continue;
    for (std::size_t k = 0; k <= kSamples; ++k) {
      t[k] = x0 + (x1 - x0) * static_cast<double>(k) / kSamples;
      if (k == 0)
        d[k] = a(x0) - b(x0);
      else if (k == kSamples)
        d[k] = a.left(x1) - b.left(x1);
      else
        d[k] = a(t[k]) - b(t[k]);
    }
    t[kSamples] = x1;
    double start = x0;
    double s = 0.0;
    for (std::size_t k = 0; k < kSamples; ++k) {
      if ((d[k] > 0.0 && d[k + 1] < 0.0) || (d[k] < 0.0 && d[k + 1] > 0.0)) {
        const double r = root(a, b, t[k], t[k + 1], d[k] > 0.0);
        s += piece(start, r);
        start = r;
      }
    }
    s += piece(start, x1);
    sums.push_back(s);
  }
  return quad::pairwise_sum(sums);
}

}  // namespace lidx
