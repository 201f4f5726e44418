#include "lidx/learned_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lidx/empirical.hpp"
#include "lidx/error.hpp"

namespace lidx {

std::string to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::Linear: return "linear";
    case SearchStrategy::Exponential: return "exp";
    case SearchStrategy::Binary: return "binary";
  }
  return "?";
}

std::string to_string(FitMethod f) {
  switch (f) {
    case FitMethod::OptimalMatched: return "opt";
    case FitMethod::Dp: return "dp";
    case FitMethod::EqualWidthInterp: return "interp";
  }
  return "?";
}

SearchStrategy parse_strategy(std::string_view s) {
  if (s == "linear") return SearchStrategy::Linear;
  if (s == "exp" || s == "exponential") return SearchStrategy::Exponential;
  if (s == "binary") return SearchStrategy::Binary;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

FitMethod parse_fit(std::string_view s) {
  if (s == "opt") return FitMethod::OptimalMatched;
  if (s == "dp") return FitMethod::Dp;
  if (s == "interp") return FitMethod::EqualWidthInterp;
  throw std::invalid_argument("unknown fit '" + std::string(s) + "'");
}

ModelClass parse_model_class(std::string_view s) {
  if (s == "p0") return ModelClass::P0;
  if (s == "p1") return ModelClass::P1;
  throw std::invalid_argument("unknown model class '" + std::string(s) + "'");
}

LearnedIndex LearnedIndex::build(KeySample sample, std::size_t K, ModelClass cls,
                                 SearchStrategy strategy, FitMethod fit, BuildOptions options) {
  const std::size_t n = sample.size();
  if (K == 0) throw std::domain_error("LearnedIndex::build: K must be >= 1");
  if (K > n) throw std::domain_error("LearnedIndex::build: K must not exceed n");
  const double nn = static_cast<double>(n);
  const Interval s = sample.support();

  switch (fit) {
    case FitMethod::OptimalMatched: {
      if (cls != ModelClass::P0)
        throw UnsupportedError(
            "LearnedIndex::build: the optimal matched fit is piecewise constant");
      PiecewiseModel m = optimal_p0_matched(sample.source(), K).model.scaled(nn);
      return LearnedIndex(std::move(sample), std::move(m), strategy);
    }
    case FitMethod::Dp: {
      const Target t = Target::from_cdf(ecdf_model(sample), nn);
      const Measure mu = Measure::resolve(options.measure, sample.source(), s);
      const std::size_t grid = std::max(options.grid, 20 * K);
      DpOptions dp;
      dp.refine_affine = false;
      if (cls == ModelClass::P0) {
        // n * F_n is flat between keys, so some optimal P0 fit breaks only at keys
        dp.candidates.push_back(s.lo);
        for (double k : sample.keys())
          if (k > dp.candidates.back() && k < s.hi) dp.candidates.push_back(k);
        dp.candidates.push_back(s.hi);
        if (dp.candidates.size() - 1 < K) dp.candidates.clear();
      }
      PiecewiseModel m = optimal_piecewise_dp(t, K, cls, mu, grid, std::move(dp)).model;
      return LearnedIndex(std::move(sample), std::move(m), strategy);
    }
    case FitMethod::EqualWidthInterp: {
      std::vector<double> b(K + 1);
      for (std::size_t i = 0; i <= K; ++i)
        b[i] = s.lo + s.length() * static_cast<double>(i) / static_cast<double>(K);
      b.back() = s.hi;
      std::vector<Segment> seg(K);
      for (std::size_t i = 0; i < K; ++i) {
        const double r0 = static_cast<double>(sample.rank(b[i]));
        const double r1 = static_cast<double>(sample.rank(b[i + 1]));
        if (cls == ModelClass::P0) {
          seg[i] = Segment::constant(0.5 * (r0 + r1));
        } else {
          const double slope = (r1 - r0) / (b[i + 1] - b[i]);
          seg[i] = Segment::affine(slope, r0 - slope * b[i]);
        }
      }
      PiecewiseModel m(std::move(b), std::move(seg));
      return LearnedIndex(std::move(sample), std::move(m), strategy);
    }
  }
  throw std::logic_error("LearnedIndex::build: bad fit");
}

LearnedIndex::LearnedIndex(KeySample sample, PiecewiseModel model, SearchStrategy strategy)
    : sample_(std::move(sample)), model_(std::move(model)), strategy_(strategy) {
  const Interval s = sample_.support();
  const Interval m = model_.span();
  const double tol = 1e-9 * std::max(s.length(), 1e-300);
  if (std::abs(m.lo - s.lo) > tol || std::abs(m.hi - s.hi) > tol)
    throw std::domain_error("LearnedIndex: model breakpoints must span the sample support");

  // Between consecutive critical points the rank is constant and the clamped
  // prediction is monotone, so the supremum sits at a critical point, taken
  // from the right or from the left.
  std::vector<double> crit(sample_.keys().begin(), sample_.keys().end());
  const auto b = model_.breakpoints();
  crit.insert(crit.end(), b.begin(), b.end());
  crit.push_back(s.lo);
  crit.push_back(s.hi);
  double worst = 0.0;
  for (double c : crit) {
    if (c < s.lo || c > s.hi) continue;
    worst = std::max(worst, epsilon(c));
    worst = std::max(worst, std::abs(predict_left(c) - static_cast<double>(sample_.rank_left(c))));
  }
  worst_ = worst;
  window_ = static_cast<std::size_t>(std::ceil(worst));
}

double LearnedIndex::predict(double q) const noexcept {
  const Interval s = sample_.support();
  const double h = model_(std::clamp(q, s.lo, s.hi));
  return std::clamp(h, 0.0, static_cast<double>(sample_.size()));
}

double LearnedIndex::predict_left(double q) const noexcept {
  const Interval s = sample_.support();
  const double h = model_.left(std::clamp(q, s.lo, s.hi));
  return std::clamp(h, 0.0, static_cast<double>(sample_.size()));
}

double LearnedIndex::epsilon(double q) const noexcept {
  return std::abs(predict(q) - static_cast<double>(sample_.rank(q)));
}

namespace {

// Rank within the candidate range [lo, hi] known to contain it. The test
// "rank >= m" reads key m - 1; every read is one step.
std::size_t search(std::span<const double> keys, double q, std::size_t lo, std::size_t hi,
                   std::size_t& steps) {
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    ++steps;
    if (keys[mid - 1] <= q)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace

std::size_t LearnedIndex::linear(double q, std::size_t p, std::size_t& steps) const {
  const auto keys = sample_.keys();
  const std::size_t n = keys.size();
  std::size_t r = p;
  while (r < n && keys[r] <= q) ++r;
  while (r > 0 && keys[r - 1] > q) --r;
  steps = std::max<std::size_t>(r > p ? r - p : p - r, 1);
  return r;
}

std::size_t LearnedIndex::exponential(double q, std::size_t p, std::size_t& steps) const {
  const auto keys = sample_.keys();
  const std::size_t n = keys.size();
  steps = 0;
  bool right = false;
  if (p < n) {
    ++steps;
    right = keys[p] <= q;
  }
  std::size_t lo = 0;
  std::size_t hi = n;
  if (right) {
    lo = p + 1;
    for (std::size_t o = 1;; o *= 2) {
      const std::size_t idx = p + o;
      if (idx >= n) break;
      ++steps;
      if (keys[idx] <= q) {
        lo = idx + 1;
      } else {
        hi = idx;
        break;
      }
    }
  } else {
    hi = p;
    for (std::size_t o = 0;; o = o == 0 ? 1 : 2 * o) {
      if (o >= p) {
        lo = 0;
        break;
      }
      const std::size_t m = p - o;
      ++steps;
      if (keys[m - 1] <= q) {
        lo = m;
        break;
      }
      hi = m - 1;
    }
  }
  return search(keys, q, lo, hi, steps);
}

std::size_t LearnedIndex::bounded_binary(double q, std::size_t p, std::size_t& steps) const {
  const auto keys = sample_.keys();
  const std::size_t n = keys.size();
  const std::size_t lo = p > window_ ? p - window_ : 0;
  const std::size_t hi = std::min(n, p + window_);
  steps = 0;
  const std::size_t r = search(keys, q, lo, hi, steps);
  if ((r == lo && lo > 0 && keys[lo - 1] > q) || (r == hi && hi < n && keys[hi] <= q))
    throw InvariantViolation("LearnedIndex: rank fell outside the binary search window");
  return r;
}

CostBreakdown LearnedIndex::rank(double q) const {
  if (std::isnan(q)) throw std::domain_error("LearnedIndex::rank: NaN query");
  const Interval s = sample_.support();
  const double n = static_cast<double>(sample_.size());
  CostBreakdown c;
  const double qc = std::clamp(q, s.lo, s.hi);
  const std::size_t k = model_.locate(qc, c.routing_steps);
  const double h = std::clamp(model_.segments()[k](qc), 0.0, n);
  const auto p = std::min(static_cast<std::size_t>(std::floor(h + 0.5)), sample_.size());
  switch (strategy_) {
    case SearchStrategy::Linear: c.rank = linear(q, p, c.search_steps); break;
    case SearchStrategy::Exponential: c.rank = exponential(q, p, c.search_steps); break;
    case SearchStrategy::Binary: c.rank = bounded_binary(q, p, c.search_steps); break;
  }
  c.epsilon = std::abs(h - static_cast<double>(c.rank));
  return c;
}

}  // namespace lidx
