#include "affine_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lidx/approx.hpp"
#include "lidx/integrate.hpp"

namespace lidx {
namespace detail {
namespace {

double objective(const Target& t, Interval iv, const Measure& mu, std::size_t panels,
                 double center, double value, double slope) {
  return integrate_abs_difference(t, Target::affine(slope, value - slope * center, iv), mu, iv,
                                  panels);
}

}  // namespace

AffineFit nelder_mead_affine(const Target& target, Interval iv, const Measure& mu,
                             std::size_t panels, AffineFit start, std::array<double, 2> step,
                             double tol) {
  using P = std::array<double, 2>;
  const double c = start.center;
  auto f = [&](const P& u) {
    return objective(target, iv, mu, panels, c, start.value + u[0] * step[0],
                     start.slope + u[1] * step[1]);
  };
  std::array<P, 3> x{P{0, 0}, P{1, 0}, P{0, 1}};
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  for (int it = 0; it < 2000; ++it) {
    std::array<int, 3> o{0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const P& best = x[o[0]];
    double spread = 0.0;
    for (int v : {o[1], o[2]})
      spread = std::max({spread, std::abs(x[v][0] - best[0]), std::abs(x[v][1] - best[1])});
    if (spread < tol) break;

    const P cen{0.5 * (x[o[0]][0] + x[o[1]][0]), 0.5 * (x[o[0]][1] + x[o[1]][1])};
    const P& worst = x[o[2]];
    auto along = [&](double t) {
      return P{cen[0] + t * (worst[0] - cen[0]), cen[1] + t * (worst[1] - cen[1])};
    };
    const P r = along(-1.0);
    const double fr = f(r);
    if (fr < fx[o[0]]) {
      const P e = along(-2.0);
      const double fe = f(e);
      if (fe < fr) {
        x[o[2]] = e;
        fx[o[2]] = fe;
      } else {
        x[o[2]] = r;
        fx[o[2]] = fr;
      }
    } else if (fr < fx[o[1]]) {
      x[o[2]] = r;
      fx[o[2]] = fr;
    } else {
      const P k = fr < fx[o[2]] ? along(-0.5) : along(0.5);
      const double fk = f(k);
      if (fk < std::min(fr, fx[o[2]])) {
        x[o[2]] = k;
        fx[o[2]] = fk;
      } else {
        for (int v : {o[1], o[2]}) {
          x[v] = P{0.5 * (x[v][0] + best[0]), 0.5 * (x[v][1] + best[1])};
          fx[v] = f(x[v]);
        }
      }
    }
  }
  const auto i = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {start.value + x[i][0] * step[0], start.slope + x[i][1] * step[1], c, fx[i]};
}

}  // namespace detail

ApproxResult best_affine_l1(const Target& target, Interval iv, const Measure& mu,
                            std::size_t grid) {
  if (grid < 1000) throw std::domain_error("best_affine_l1: grid must be >= 1000");
  if (!(iv.hi > iv.lo)) throw std::domain_error("best_affine_l1: empty interval");
  constexpr int kSeed = 33;
  const double L = iv.length();
  const double c = 0.5 * (iv.lo + iv.hi);

  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (int i = 0; i <= 64; ++i) {
    const double x = i == 64 ? iv.hi : iv.lo + L * i / 64.0;
    const double y = i == 64 ? target.left(x) : target(x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  double range = ymax - ymin;
  if (!(range > 0.0)) range = std::max(1.0, std::abs(ymax));
  const double secant = (target.left(iv.hi) - target(iv.lo)) / L;
  const double sw = std::max(std::abs(secant), range / L);
  const double v0 = ymin;
  const double m0 = secant - sw;
  const double dv = range / (kSeed - 1);
  const double dm = 2.0 * sw / (kSeed - 1);

  detail::AffineFit best{0, 0, c, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < kSeed; ++i)
    for (int j = 0; j < kSeed; ++j) {
      const double v = v0 + dv * i;
      const double m = m0 + dm * j;
      const double e = integrate_abs_difference(target, Target::affine(m, v - m * c, iv), mu, iv,
                                                grid);
      if (e < best.error) best = {v, m, c, e};
    }

  for (double shrink : {1.0, 0.125}) {
    const detail::AffineFit r = detail::nelder_mead_affine(
        target, iv, mu, grid, best, {dv * shrink, dm * shrink}, 1e-8 / shrink);
    if (r.error <= best.error) best = r;
  }
  PiecewiseModel model({iv.lo, iv.hi}, {Segment::affine(best.slope, best.value - best.slope * c)});
  return {std::move(model), best.error, ApproxMethod::DpOracle};
}

ApproxResult best_affine_l1(const CdfModel& target, Interval iv, const MeasureSpec& mu,
                            std::size_t grid) {
  return best_affine_l1(Target::from_cdf(target), iv, Measure::resolve(mu, target, iv), grid);
}

}  // namespace lidx
