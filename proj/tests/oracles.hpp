#pragma once

// Brute-force reference computations used only by tests. None of them share
// code with the library beyond the CdfModel and KeySample types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

inline std::size_t rank(std::span<const double> keys, double q) {
  std::size_t r = 0;
  for (double k : keys) r += k <= q ? 1 : 0;
  return r;
}

/// Composite trapezoid rule with `n` panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
  return s * h;
}

/// Trapezoid rule applied separately on each piece between consecutive
/// `cuts` (which must include both ends), `n` panels in total. Piece ends
/// are evaluated just inside the piece so one-sided values are used at
/// jumps.
inline double trapezoid_pieces(const std::function<double(double)>& f,
                               const std::vector<double>& cuts, std::size_t n) {
  const double span = cuts.back() - cuts.front();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(n * (b - a) / span));
    const double h = (b - a) / static_cast<double>(m);
    double t = 0.5 * (f(a) + f(std::nextafter(b, a)));
    for (std::size_t k = 1; k < m; ++k) t += f(a + h * static_cast<double>(k));
    s += t * h;
  }
  return s;
}

/// Composite midpoint rule with `n` panels; never evaluates the endpoints.
inline double midpoint(const std::function<double(double)>& f, double a, double b,
                       std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(a + h * (static_cast<double>(i) + 0.5));
  return s * h;
}

/// Composite Simpson rule with `n` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i)
    s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

/// n * int (u - F_n)^2 du over [0, 1] for the F-values `u` of a sample,
/// by Simpson on every interval between consecutive sorted values.
inline double cvm_numeric(std::vector<double> u, std::size_t panels_per_gap) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), u.begin(), u.end());
  cuts.push_back(1.0);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double level = static_cast<double>(i) / n;
    s += simpson([level](double x) { return (x - level) * (x - level); }, cuts[i], cuts[i + 1],
                 panels_per_gap);
  }
  return n * s;
}

/// Two-sided binomial confidence interval for a frequency (normal
/// approximation with z = 2.5758, i.e. 99%).
struct Interval99 {
  double lo, hi;
};
inline Interval99 binomial99(double p, double trials) {
  const double half = 2.5758293035489 * std::sqrt(p * (1.0 - p) / trials);
  return {p - half, p + half};
}

}  // namespace oracle
