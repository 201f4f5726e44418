#include "lidx/target.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lidx {

Target::Target(Fn value, Fn left, Interval support, std::vector<double> kinks)
    : value_(std::make_shared<const Fn>(std::move(value))),
      left_(std::make_shared<const Fn>(std::move(left))),
      support_(support),
      kinks_(std::move(kinks)) {
  if (!(support_.hi > support_.lo)) throw std::domain_error("Target: empty support");
  std::erase_if(kinks_, [&](double k) { return !(k > support_.lo && k < support_.hi); });
  std::sort(kinks_.begin(), kinks_.end());
  kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
}

Target Target::from_cdf(const CdfModel& cdf, double scale) {
  return Target([cdf, scale](double x) { return scale * cdf.cdf(x); },
                [cdf, scale](double x) { return scale * cdf.cdf_left(x); }, cdf.support(),
                cdf.kinks());
}

Target Target::from_model(const PiecewiseModel& model) {
  const auto b = model.breakpoints();
  return Target([model](double x) { return model(x); },
                [model](double x) { return model.left(x); }, model.span(),
                std::vector<double>(b.begin(), b.end()));
}

Target Target::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw std::domain_error("Target::piecewise_linear: need >= 2 matching nodes");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw std::domain_error("Target::piecewise_linear: nodes must increase");
  auto data = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      xs, std::move(ys));
  auto eval = [data](double x) {
    const auto& [px, py] = *data;
    if (x <= px.front()) return py.front();
    if (x >= px.back()) return py.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(px.begin(), px.end(), x) -
                                            px.begin());
    const double t = (x - px[k - 1]) / (px[k] - px[k - 1]);
    return py[k - 1] + t * (py[k] - py[k - 1]);
  };
  const Interval s{xs.front(), xs.back()};
  return Target(eval, eval, s, std::move(xs));
}

Target Target::affine(double slope, double intercept, Interval support) {
  auto f = [slope, intercept](double x) { return intercept + slope * x; };
  return Target(f, f, support, {});
}

Target Target::scaled(double factor) const {
  auto v = value_;
  auto l = left_;
  return Target([v, factor](double x) { return factor * (*v)(x); },
                [l, factor](double x) { return factor * (*l)(x); }, support_, kinks_);
}

}  // namespace lidx
