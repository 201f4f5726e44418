// On-grid optimal K-segment fits. Breakpoints are restricted to the grid
// edges (uniform, or caller-supplied candidates); inside every panel the
// target is sampled at Gauss nodes (panels are cut at kinks first), which
// turns each cell cost into a weighted L1 problem over a contiguous node
// range.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "affine_fit.hpp"
#include "lidx/approx.hpp"
#include "lidx/integrate.hpp"
#include "lidx/quadrature.hpp"

namespace lidx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kOrder = 6;
constexpr std::size_t kGroups = 24;

struct FineGrid {
  double lo = 0.0;
  std::vector<double> edges;
  std::vector<std::size_t> start;  // first node of each panel; start[N] = node count
  std::vector<double> x;           // x - lo
  std::vector<double> y;
  std::vector<double> w;
  std::vector<long double> W, WX, WY;  // prefix sums
};

FineGrid build_grid(const Target& t, const Measure& mu, std::vector<double> edges) {
  FineGrid g;
  const Interval s = t.support();
  const std::size_t N = edges.size() - 1;
  g.lo = s.lo;
  g.edges = std::move(edges);

  std::vector<double> kinks(t.kinks());
  kinks.insert(kinks.end(), mu.kinks.begin(), mu.kinks.end());
  std::sort(kinks.begin(), kinks.end());

  const quad::GaussRule& rule = quad::gauss_legendre(kOrder);
  auto kit = kinks.begin();
  g.start.reserve(N + 1);
  for (std::size_t p = 0; p < N; ++p) {
    g.start.push_back(g.x.size());
    const double e0 = g.edges[p];
    const double e1 = g.edges[p + 1];
    while (kit != kinks.end() && *kit <= e0) ++kit;
    double a = e0;
    for (;;) {
      const bool inner = kit != kinks.end() && *kit < e1;
      const double b = inner ? *kit : e1;
      if (b > a) {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double x = mid + half * rule.nodes[k];
          g.x.push_back(x - s.lo);
          g.y.push_back(t(x));
          g.w.push_back(half * rule.weights[k] * mu.density(x));
        }
      }
      if (!inner) break;
      a = b;
      ++kit;
    }
  }
  g.start.push_back(g.x.size());

  const std::size_t m = g.x.size();
  g.W.assign(m + 1, 0.0L);
  g.WX.assign(m + 1, 0.0L);
  g.WY.assign(m + 1, 0.0L);
  for (std::size_t i = 0; i < m; ++i) {
    g.W[i + 1] = g.W[i] + g.w[i];
    g.WX[i + 1] = g.WX[i] + static_cast<long double>(g.w[i]) * g.x[i];
    g.WY[i + 1] = g.WY[i] + static_cast<long double>(g.w[i]) * g.y[i];
  }
  return g;
}

// --- P0: weighted median over a node range of a nondecreasing sequence ---

struct MedianCost {
  const FineGrid& g;

  struct Cell {
    double cost;
    double level;
  };

  Cell operator()(std::size_t i, std::size_t j) const {
    const std::size_t a = g.start[i];
    const std::size_t b = g.start[j];
    const long double total = g.W[b] - g.W[a];
    if (!(total > 0.0L)) return {0.0, g.y[(a + b - 1) / 2]};
    const long double half = g.W[a] + 0.5L * total;
    const auto it = std::lower_bound(g.W.begin() + static_cast<std::ptrdiff_t>(a) + 1,
                                     g.W.begin() + static_cast<std::ptrdiff_t>(b) + 1, half);
    std::size_t m = static_cast<std::size_t>(it - g.W.begin()) - 1;
    m = std::min(m, b - 1);
    const long double c = g.y[m];
    const long double wle = g.W[m + 1] - g.W[a];
    const long double sle = g.WY[m + 1] - g.WY[a];
    const long double wgt = g.W[b] - g.W[m + 1];
    const long double sgt = g.WY[b] - g.WY[m + 1];
    const long double cost = c * wle - sle + sgt - c * wgt;
    return {static_cast<double>(std::max(0.0L, cost)), g.y[m]};
  }
};

// --- P1: weighted least-absolute-deviation line ---

struct Pt {
  double x, y, w;
};

struct LadFit {
  double cost = 0.0;
  double slope = 0.0;
  double value = 0.0;  // line is value + slope * x (x relative to grid lo)
};

// Weighted least-absolute-deviation line by pivoting (Wesolowsky): the best
// line through a fixed point p has the weighted median slope of
// (y_q - y_p) / (x_q - x_p) with weights w_q |x_q - x_p|. Each accepted
// rotation strictly lowers the objective and ends on a line through two or
// more points. The edges leaving such a line are the rotations about the
// points on it, so when none of them improves the line is optimal.
LadFit lad_fit(std::span<const Pt> pts, std::vector<std::pair<double, double>>& sw) {
  if (pts.empty()) return {};
  if (pts.size() == 1) return {0.0, 0.0, pts[0].y};
  auto cost = [&](double s, double v) {
    double c = 0.0;
    for (const Pt& p : pts) c += p.w * std::abs(p.y - v - s * p.x);
    return c;
  };
  auto rotate = [&](std::size_t pivot) {
    const Pt& p = pts[pivot];
    sw.clear();
    double half = 0.0;
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const double dx = pts[q].x - p.x;
      if (q == pivot || dx == 0.0 || !(pts[q].w > 0.0)) continue;
      sw.emplace_back((pts[q].y - p.y) / dx, pts[q].w * std::abs(dx));
      half += sw.back().second;
    }
    if (sw.empty()) return LadFit{cost(0.0, p.y), 0.0, p.y};
    half *= 0.5;
    std::sort(sw.begin(), sw.end());
    double acc = 0.0;
    double s = sw.back().first;
    for (const auto& [slope, w] : sw) {
      acc += w;
      if (acc >= half) {
        s = slope;
        break;
      }
    }
    const double v = p.y - s * p.x;
    return LadFit{cost(s, v), s, v};
  };

  double total = 0.0;
  for (const Pt& p : pts) total += p.w;
  std::size_t start = 0;
  for (double acc = 0.0; start + 1 < pts.size(); ++start) {
    acc += pts[start].w;
    if (acc >= 0.5 * total) break;
  }
  LadFit best = rotate(start);
  for (std::size_t it = 0; it < 4 * pts.size() + 8; ++it) {
    bool improved = false;
    for (std::size_t q = 0; q < pts.size() && !improved; ++q) {
      if (!(pts[q].w > 0.0)) continue;
      const double r = pts[q].y - best.value - best.slope * pts[q].x;
      if (std::abs(r) > 1e-12 * (1.0 + std::abs(pts[q].y))) continue;
      const LadFit f = rotate(q);
      if (f.cost < best.cost * (1.0 - 1e-14)) {
        best = f;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return best;
}

struct LadCost {
  const FineGrid& g;
  mutable std::vector<Pt> pts;
  mutable std::vector<std::pair<double, double>> sw;

  void gather(std::size_t a, std::size_t b) const {
    pts.clear();
    const std::size_t m = b - a;
    if (m <= kGroups) {
      for (std::size_t k = a; k < b; ++k)
        if (g.w[k] > 0.0) pts.push_back({g.x[k], g.y[k], g.w[k]});
      return;
    }
    for (std::size_t q = 0; q < kGroups; ++q) {
      const std::size_t u = a + m * q / kGroups;
      const std::size_t v = a + m * (q + 1) / kGroups;
      const long double w = g.W[v] - g.W[u];
      if (!(w > 0.0L)) continue;
      pts.push_back({static_cast<double>((g.WX[v] - g.WX[u]) / w),
                     static_cast<double>((g.WY[v] - g.WY[u]) / w), static_cast<double>(w)});
    }
  }

  LadFit fit(std::size_t i, std::size_t j) const {
    gather(g.start[i], g.start[j]);
    return lad_fit(pts, sw);
  }

  double operator()(std::size_t i, std::size_t j) const { return fit(i, j).cost; }
};

// dp[k][j]: best cost of covering edges [0, j] with k cells; arg[k][j]: the
// start edge of the last cell.
struct Table {
  std::size_t N, K;
  std::vector<double> dp;
  std::vector<std::size_t> arg;

  Table(std::size_t n, std::size_t k)
      : N(n), K(k), dp((k + 1) * (n + 1), kInf), arg((k + 1) * (n + 1), 0) {}
  double& at(std::size_t k, std::size_t j) { return dp[j * (K + 1) + k]; }
  std::size_t& from(std::size_t k, std::size_t j) { return arg[j * (K + 1) + k]; }

  std::vector<std::size_t> cuts() {
    std::vector<std::size_t> c(K + 1);
    std::size_t j = N;
    for (std::size_t k = K; k >= 1; --k) {
      c[k] = j;
      j = from(k, j);
    }
    c[0] = j;
    return c;
  }
};

template <class Cost>
Table exhaustive(std::size_t N, std::size_t K, const Cost& cost) {
  Table t(N, K);
  t.at(0, 0) = 0.0;
  for (std::size_t j = 1; j <= N; ++j) {
    const std::size_t kmax = std::min(K, j);
    double* row = &t.at(0, j);
    std::size_t* arg = &t.from(0, j);
    for (std::size_t i = 0; i < j; ++i) {
      const double c = cost(i, j);
      const double* prev = &t.at(0, i);
      for (std::size_t k = 1; k <= kmax; ++k) {
        const double v = prev[k - 1] + c;
        if (v < row[k]) {
          row[k] = v;
          arg[k] = i;
        }
      }
    }
  }
  return t;
}

// Valid when the cell cost satisfies the quadrangle inequality, which holds
// for the weighted L1 median cost of a monotone sequence: the optimal start
// of the last cell is then nondecreasing in j.
Table divide_conquer(std::size_t N, std::size_t K, const MedianCost& cost) {
  Table t(N, K);
  t.at(0, 0) = 0.0;
  for (std::size_t j = 1; j <= N; ++j) {
    t.at(1, j) = cost(0, j).cost;
    t.from(1, j) = 0;
  }
  struct Frame {
    std::size_t jl, jr, ol, orr;
  };
  std::vector<Frame> stack;
  for (std::size_t k = 2; k <= K; ++k) {
    stack.push_back({k, N, k - 1, N - 1});
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.jl > f.jr) continue;
      const std::size_t jm = f.jl + (f.jr - f.jl) / 2;
      double best = kInf;
      std::size_t bi = f.ol;
      const std::size_t hi = std::min(f.orr, jm - 1);
      for (std::size_t i = f.ol; i <= hi; ++i) {
        const double v = t.at(k - 1, i) + cost(i, jm).cost;
        if (v < best) {
          best = v;
          bi = i;
        }
      }
      t.at(k, jm) = best;
      t.from(k, jm) = bi;
      if (jm > f.jl) stack.push_back({f.jl, jm - 1, f.ol, bi});
      stack.push_back({jm + 1, f.jr, bi, f.orr});
    }
  }
  return t;
}

int direction(const std::vector<double>& y) {
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * (scale + 1e-300);
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] < y[i - 1] - tol) up = false;
    if (y[i] > y[i - 1] + tol) down = false;
  }
  if (up) return 1;
  if (down) return -1;
  return 0;
}

}  // namespace

ApproxResult optimal_piecewise_dp(const Target& target, std::size_t K, ModelClass cls,
                                  const Measure& mu, std::size_t grid, DpOptions opts) {
  if (K == 0) throw std::domain_error("optimal_piecewise_dp: K must be >= 1");
  const Interval s = target.support();
  std::vector<double> edges;
  if (opts.candidates.empty()) {
    if (K > grid) throw std::domain_error("optimal_piecewise_dp: K exceeds the grid node count");
    if (grid < 20 * K) throw std::domain_error("optimal_piecewise_dp: grid must be >= 20K");
    edges.resize(grid + 1);
    for (std::size_t i = 0; i <= grid; ++i)
      edges[i] = s.lo + s.length() * static_cast<double>(i) / static_cast<double>(grid);
    edges.back() = s.hi;
  } else {
    edges = std::move(opts.candidates);
    if (edges.size() < 2 || edges.front() != s.lo || edges.back() != s.hi ||
        std::adjacent_find(edges.begin(), edges.end(), std::greater_equal<>()) != edges.end())
      throw std::domain_error("optimal_piecewise_dp: candidates must increase across the support");
    if (K > edges.size() - 1)
      throw std::domain_error("optimal_piecewise_dp: K exceeds the candidate cell count");
  }
  const std::size_t N = edges.size() - 1;
  FineGrid g = build_grid(target, mu, std::move(edges));
  std::vector<double> breaks;
  std::vector<Segment> segs;

  if (cls == ModelClass::P0) {
    const int dir = direction(g.y);
    if (dir == 0)
      throw std::domain_error("optimal_piecewise_dp: P0 cells need a monotone target");
    if (dir < 0) {
      for (double& v : g.y) v = -v;
      for (std::size_t i = 0; i < g.y.size(); ++i)
        g.WY[i + 1] = g.WY[i] + static_cast<long double>(g.w[i]) * g.y[i];
    }
    const MedianCost cost{g};
    Table t = opts.exhaustive
                  ? exhaustive(N, K, [&](std::size_t i, std::size_t j) { return cost(i, j).cost; })
                  : divide_conquer(N, K, cost);
    const auto c = t.cuts();
    for (std::size_t k = 0; k <= K; ++k) breaks.push_back(g.edges[c[k]]);
    for (std::size_t k = 0; k < K; ++k)
      segs.push_back(Segment::constant(dir * cost(c[k], c[k + 1]).level));
  } else {
    const LadCost cost{g, {}, {}};
    Table t = exhaustive(N, K, cost);
    const auto c = t.cuts();
    for (std::size_t k = 0; k <= K; ++k) breaks.push_back(g.edges[c[k]]);
    for (std::size_t k = 0; k < K; ++k) {
      const LadFit f = cost.fit(c[k], c[k + 1]);
      segs.push_back(Segment::affine(f.slope, f.value - f.slope * g.lo));
    }
    if (opts.refine_affine) {
      for (std::size_t k = 0; k < K; ++k) {
        const Interval iv{breaks[k], breaks[k + 1]};
        const auto panels = static_cast<std::size_t>(
            std::max(64.0, std::ceil(static_cast<double>(N) * iv.length() / s.length())));
        const double mid = 0.5 * (iv.lo + iv.hi);
        const detail::AffineFit start{segs[k](mid), segs[k].slope, mid, 0.0};
        const double before =
            integrate_abs_difference(target, Target::affine(segs[k].slope, segs[k].intercept, iv),
                                     mu, iv, panels);
        const double rise = std::abs(target.left(iv.hi) - target(iv.lo));
        const double dv = std::max(0.05 * rise, 1e-9 * (std::abs(start.value) + 1.0));
        const detail::AffineFit r =
            detail::nelder_mead_affine(target, iv, mu, panels, start, {dv, dv / iv.length()}, 1e-7);
        if (r.error < before) segs[k] = Segment::affine(r.slope, r.value - r.slope * mid);
      }
    }
  }
  PiecewiseModel model(std::move(breaks), std::move(segs));
  const double err = l1_error(model, target, mu, std::max<std::size_t>(N, 1000));
  return {std::move(model), err, ApproxMethod::DpOracle};
}

ApproxResult optimal_piecewise_dp(const CdfModel& target, std::size_t K, ModelClass cls,
                                  const MeasureSpec& mu, std::size_t grid, DpOptions opts) {
  return optimal_piecewise_dp(Target::from_cdf(target), K, cls,
                              Measure::resolve(mu, target, target.support()), grid, opts);
}

}  // namespace lidx
