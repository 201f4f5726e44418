#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "lidx/approx.hpp"
#include "lidx/measure.hpp"
#include "lidx/piecewise.hpp"
#include "lidx/sample.hpp"

namespace lidx {

enum class SearchStrategy { Linear, Exponential, Binary };
enum class FitMethod { OptimalMatched, Dp, EqualWidthInterp };

std::string to_string(SearchStrategy s);
std::string to_string(FitMethod f);
/// "linear" | "exp" | "binary"; "opt" | "dp" | "interp"; "p0" | "p1".
/// Throw std::invalid_argument.
SearchStrategy parse_strategy(std::string_view s);
FitMethod parse_fit(std::string_view s);
ModelClass parse_model_class(std::string_view s);

/// Cost of one rank query. Routing (locating the segment) and local search
/// are counted separately.
struct CostBreakdown {
  std::size_t routing_steps = 0;
  std::size_t search_steps = 0;
  double epsilon = 0.0;
  std::size_t rank = 0;
};

struct BuildOptions {
  /// Measure the Dp fit minimises against (matched = source density).
  MeasureSpec measure = MeasureSpec::matched();
  /// Dp grid; raised to 20K when smaller.
  std::size_t grid = 1000;
};

/// A piecewise predictor over a sorted key array plus a local search that
/// corrects the prediction to the exact rank #{keys <= q}.
class LearnedIndex {
 public:
  /// Fits a K-segment model to the rank function n * F_n:
  ///  - OptimalMatched: n times the equal-mass constant fit of the source
  ///    CDF (P0 only);
  ///  - Dp: the on-grid optimum for n * F_n under options.measure;
  ///  - EqualWidthInterp: equal-width cells, P1 interpolates the rank at the
  ///    cell ends, P0 takes their mean.
  /// Throws std::domain_error for K == 0 or K > n, UnsupportedError for
  /// OptimalMatched with P1 or a non-invertible source.
  static LearnedIndex build(KeySample sample, std::size_t K, ModelClass cls,
                            SearchStrategy strategy, FitMethod fit, BuildOptions options = {});

  /// Uses `model` (position units) as is. Throws std::domain_error unless
  /// the model spans the sample support.
  LearnedIndex(KeySample sample, PiecewiseModel model, SearchStrategy strategy);

  /// h(q) with q clamped to the support and the result clamped to [0, n].
  double predict(double q) const noexcept;
  /// Exact rank with the step counts. Throws InvariantViolation if the
  /// binary window misses the answer.
  CostBreakdown rank(double q) const;
  /// |predict(q) - rank(q)|.
  double epsilon(double q) const noexcept;
  /// sup_q epsilon(q), exact over the critical points.
  double worst_case_epsilon() const noexcept { return worst_; }
  /// Binary-search half-width ceil(worst_case_epsilon()).
  std::size_t window() const noexcept { return window_; }

  const KeySample& sample() const noexcept { return sample_; }
  const PiecewiseModel& model() const noexcept { return model_; }
  SearchStrategy strategy() const noexcept { return strategy_; }
  std::size_t size() const noexcept { return sample_.size(); }

 private:
  double predict_left(double q) const noexcept;
  std::size_t linear(double q, std::size_t p, std::size_t& steps) const;
  std::size_t exponential(double q, std::size_t p, std::size_t& steps) const;
  std::size_t bounded_binary(double q, std::size_t p, std::size_t& steps) const;

  KeySample sample_;
  PiecewiseModel model_;
  SearchStrategy strategy_;
  double worst_ = 0.0;
  std::size_t window_ = 0;
};

}  // namespace lidx
