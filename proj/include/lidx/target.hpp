#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lidx/distributions.hpp"
#include "lidx/piecewise.hpp"

namespace lidx {

/// A function G on a compact interval to be approximated: a CDF, a scaled
/// rank function n*F_n, a tabulated Lipschitz function, or a PiecewiseModel.
/// Evaluation is right-continuous; left() gives the left limit. `kinks` lists
/// the interior points where G or G' may jump.
class Target {
 public:
  using Fn = std::function<double(double)>;

  Target(Fn value, Fn left, Interval support, std::vector<double> kinks);

  /// scale * F. An empirical CdfModel with scale n gives the rank function.
  static Target from_cdf(const CdfModel& cdf, double scale = 1.0);
  static Target from_model(const PiecewiseModel& model);
  /// Piecewise-linear interpolant of (xs[i], ys[i]); xs strictly increasing.
  /// Need not be monotone.
  static Target piecewise_linear(std::vector<double> xs, std::vector<double> ys);
  static Target affine(double slope, double intercept, Interval support);

  double operator()(double x) const { return (*value_)(x); }
  double left(double x) const { return (*left_)(x); }
  Interval support() const noexcept { return support_; }
  const std::vector<double>& kinks() const noexcept { return kinks_; }

  Target scaled(double factor) const;

 private:
  std::shared_ptr<const Fn> value_;
  std::shared_ptr<const Fn> left_;
  Interval support_;
  std::vector<double> kinks_;
};

}  // namespace lidx
