#include "lidx/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "lidx/error.hpp"
#include "lidx/integrate.hpp"
#include "lidx/quadrature.hpp"

namespace lidx {

std::string to_string(ApproxMethod m) {
  switch (m) {
    case ApproxMethod::ClosedForm: return "closed";
    case ApproxMethod::DpOracle: return "dp";
    case ApproxMethod::LloydQuantizer: return "lloyd";
    case ApproxMethod::Interpolation: return "interp";
  }
  return "?";
}

std::string to_string(ModelClass c) { return c == ModelClass::P0 ? "p0" : "p1"; }

double l1_error(const PiecewiseModel& model, const Target& target, const Measure& mu,
                std::size_t grid) {
  if (grid < 1000) throw std::domain_error("l1_error: grid must be >= 1000");
  const Interval s = target.support();
  const Interval m = model.span();
  const double tol = 1e-9 * s.length();
  if (std::abs(m.lo - s.lo) > tol || std::abs(m.hi - s.hi) > tol)
    throw std::domain_error("l1_error: model breakpoints do not span the support");
  return integrate_abs_difference(target, Target::from_model(model), mu, s, grid);
}

double l1_error(const PiecewiseModel& model, const CdfModel& target, const MeasureSpec& mu,
                std::size_t grid) {
  return l1_error(model, Target::from_cdf(target),
                  Measure::resolve(mu, target, target.support()), grid);
}

ApproxResult optimal_p0_matched(const CdfModel& target, std::size_t K) {
  if (K == 0) throw std::domain_error("optimal_p0_matched: K must be >= 1");
  if (!target.invertible())
    throw UnsupportedError("optimal_p0_matched: target '" + target.spec() +
                           "' is not invertible");
  const double k = static_cast<double>(K);
  const Interval s = target.support();
  std::vector<double> b(K + 1);
  std::vector<Segment> seg(K);
  b.front() = s.lo;
  b.back() = s.hi;
  for (std::size_t i = 1; i < K; ++i) b[i] = target.inverse(static_cast<double>(i) / k);
  for (std::size_t i = 0; i < K; ++i)
    seg[i] = Segment::constant((2.0 * static_cast<double>(i) + 1.0) / (2.0 * k));
  return {PiecewiseModel(std::move(b), std::move(seg)), 1.0 / (4.0 * k),
          ApproxMethod::ClosedForm};
}

double pushforward_density(const CdfModel& data, const CdfModel& query, double y) {
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("pushforward_density: y must lie in (0,1)");
  const double x = data.inverse(y);
  const double f = data.density(x);
  if (!(f > 0.0))
    throw SingularityError("pushforward_density: data density vanishes at F^-1(y)");
  const double g = query.support().contains(x) ? query.density(x) : 0.0;
  return g / f;
}

ApproxResult optimal_p0_general(const CdfModel& data, const CdfModel& query, std::size_t K,
                                std::size_t grid) {
  if (K == 0) throw std::domain_error("optimal_p0_general: K must be >= 1");
  if (grid < 1000) throw std::domain_error("optimal_p0_general: grid must be >= 1000");
  if (!data.invertible())
    throw UnsupportedError("optimal_p0_general: data '" + data.spec() + "' is not invertible");
  const Interval xs = data.support();
  const Measure qx = Measure::resolve(MeasureSpec::explicit_cdf(query), data, xs);

  const Interval unit{0.0, 1.0};
  Measure fy{[data, query](double y) { return pushforward_density(data, query, y); }, unit, {}};
  for (double k : data.kinks()) fy.kinks.push_back(data.cdf(k));
  for (double k : qx.kinks)
    if (xs.contains(k)) fy.kinks.push_back(data.cdf(k));

  {
    const std::array<const std::vector<double>*, 1> cuts{&fy.kinks};
    const auto ys = quad::partition(unit, grid, cuts);
    const auto& rule = quad::gauss_legendre(8);
    std::vector<double> parts(ys.size() - 1);
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
      parts[i] = quad::integrate(fy.density, ys[i], ys[i + 1], rule);
    if (std::abs(quad::pairwise_sum(parts) - 1.0) > 1e-3)
      throw ResolutionError("optimal_p0_general: grid does not resolve the pushforward density");
  }

  const Target identity = Target::affine(1.0, 0.0, unit);
  const ApproxResult qy = optimal_piecewise_dp(identity, K, ModelClass::P0, fy, grid);

  std::vector<double> b;
  const auto yb = qy.model.breakpoints();
  b.reserve(yb.size());
  b.push_back(xs.lo);
  for (std::size_t i = 1; i + 1 < yb.size(); ++i) b.push_back(data.inverse(yb[i]));
  b.push_back(xs.hi);
  for (std::size_t i = 1; i < b.size(); ++i)
    if (!(b[i] > b[i - 1]))
      throw ResolutionError("optimal_p0_general: cells collapse when mapped back to key space");
  const auto ys = qy.model.segments();
  PiecewiseModel model(std::move(b), std::vector<Segment>(ys.begin(), ys.end()));
  const double err = l1_error(model, Target::from_cdf(data), qx, grid);
  return {std::move(model), err, ApproxMethod::LloydQuantizer};
}

AdversarialWitness adversarial_lower_bound(std::size_t K) {
  if (K < 2) throw std::domain_error("adversarial_lower_bound: K must be >= 2");
  return {2 * (K - 1), 1.0 / (64.0 * static_cast<double>(K - 1))};
}

InterpolationResult interpolation_upper_bound(const CdfModel& target, std::size_t K,
                                              Smoothness smoothness) {
  if (K == 0) throw std::domain_error("interpolation_upper_bound: K must be >= 1");
  if (!(smoothness.constant >= 0.0))
    throw std::domain_error("interpolation_upper_bound: smoothness constant must be >= 0");
  const Interval s = target.support();
  const double L = s.length();
  const double k = static_cast<double>(K);
  std::vector<double> b(K + 1);
  for (std::size_t i = 0; i <= K; ++i) b[i] = s.lo + L * static_cast<double>(i) / k;
  b.back() = s.hi;
  std::vector<Segment> seg(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double a = b[i];
    const double fa = target.cdf(a);
    const double slope = smoothness.kind == Smoothness::Kind::Lipschitz
                             ? (target.cdf(b[i + 1]) - fa) / (b[i + 1] - a)
                             : target.density(a);
    seg[i] = Segment::affine(slope, fa - slope * a);
  }
  PiecewiseModel model(std::move(b), std::move(seg));
  const double err = l1_error(model, Target::from_cdf(target), Measure::lebesgue(s), 1000);
  const double ceiling = smoothness.kind == Smoothness::Kind::Lipschitz
                             ? smoothness.constant * L / k
                             : smoothness.constant * L * L / (6.0 * k * k);
  if (err > ceiling * (1.0 + 1e-9) + 1e-12)
    throw InvariantViolation("interpolation_upper_bound: measured error exceeds the ceiling");
  return {{std::move(model), err, ApproxMethod::Interpolation}, ceiling};
}

LipschitzTransform cdf_from_lipschitz(std::span<const double> values, std::size_t grid) {
  if (grid == 0 || values.size() != grid + 1)
    throw std::domain_error("cdf_from_lipschitz: need grid + 1 values");
  const double h = 1.0 / static_cast<double>(grid);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::domain_error("cdf_from_lipschitz: non-finite value");
    if (i > 0 && std::abs(values[i] - values[i - 1]) > h + 1e-12)
      throw std::domain_error("cdf_from_lipschitz: input is not 1-Lipschitz");
  }
  const double f0 = values.front();
  const double norm = values.back() + 2.0 - f0;
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = (values[i] + 2.0 * static_cast<double>(i) * h - f0) / norm;
  out.front() = 0.0;
  out.back() = 1.0;
  return {CdfModel::tabulated(std::move(out)), norm};
}

}  // namespace lidx
