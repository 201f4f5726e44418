#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lidx {

/// Closed interval [lo, hi] in key units.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Bounds c_F <= f(x) <= C_F on the density over the support. `upper` is
/// +inf when the density is unbounded.
struct DensityBounds {
  double lower = 0.0;
  double upper = 0.0;

  bool bounded_away() const noexcept;
};

namespace dist {

struct Uniform {
  double a, b;
};
struct TruncatedLogistic {
  double center, scale, a, b;
};
struct TruncatedExponential {
  double rate, a, b;
};
/// F(x) = x^p on [0, 1].
struct PowerLaw {
  double p;
};
/// M affine copies of x^2 stacked into a continuous CDF on [0, 1]; on
/// [i/M, (i+1)/M] it equals (t^2 + i) / M with t = Mx - i.
struct AdversarialStaircase {
  std::size_t steps;
};
/// Piecewise-linear CDF through equally spaced nodes on [0, 1].
struct Tabulated {
  std::shared_ptr<const std::vector<double>> values;
};
/// Step CDF of a finite sample (right-continuous).
struct Empirical {
  std::shared_ptr<const std::vector<double>> keys;
  Interval support;
};

}  // namespace dist

/// Analytic distribution on a compact support: CDF, left limit, inverse,
/// density, and the density bounds used by the logarithmic query bound.
/// Immutable; copies share tabulated storage.
class CdfModel {
 public:
  using Params = std::variant<dist::Uniform, dist::TruncatedLogistic,
                              dist::TruncatedExponential, dist::PowerLaw,
                              dist::AdversarialStaircase, dist::Tabulated,
                              dist::Empirical>;

  static CdfModel uniform(double a, double b);
  static CdfModel logistic(double center, double scale, double a, double b);
  static CdfModel exponential(double rate, double a, double b);
  static CdfModel power_law(double p);
  static CdfModel staircase(std::size_t steps);
  /// `values[k]` is F(k / (values.size() - 1)); must start at 0, end at 1 and
  /// be strictly increasing.
  static CdfModel tabulated(std::vector<double> values);
  /// `sorted_keys` must be sorted and contained in `support`.
  static CdfModel empirical(std::vector<double> sorted_keys, Interval support);

  /// F(x): 0 below the support, 1 above. Throws std::domain_error on NaN.
  double cdf(double x) const;
  /// lim_{y -> x-} F(y). Differs from cdf() only for the empirical kind.
  double cdf_left(double x) const;
  /// F^{-1}(u) for u in [0, 1]. Throws UnsupportedError for step CDFs.
  double inverse(double u) const;
  /// f(x) for x in the support (right derivative at kinks).
  double density(double x) const;

  Interval support() const noexcept { return support_; }
  DensityBounds density_bounds() const;
  /// Interior points where F or f is not smooth.
  std::vector<double> kinks() const;
  bool invertible() const noexcept;
  bool has_density() const noexcept;
  /// Spec string accepted by parse_cdf_spec (tabulated/empirical kinds
  /// render a descriptive, non-parseable tag).
  std::string spec() const;

  const Params& params() const noexcept { return params_; }

 private:
  CdfModel(Params p, Interval support) : params_(std::move(p)), support_(support) {}

  Params params_;
  Interval support_;
};

/// Parses `uniform:a,b | logistic:center,scale,a,b | exp:rate,a,b | pow:p |
/// staircase:M`. Throws std::invalid_argument on malformed input.
CdfModel parse_cdf_spec(std::string_view text);

}  // namespace lidx
