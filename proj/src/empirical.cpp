#include "lidx/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lidx/integrate.hpp"
#include "lidx/quadrature.hpp"

namespace lidx {

double ecdf_eval(const KeySample& sample, double x) {
  return static_cast<double>(sample.rank(x)) / static_cast<double>(sample.size());
}

CdfModel ecdf_model(const KeySample& sample) {
  const auto k = sample.keys();
  return CdfModel::empirical(std::vector<double>(k.begin(), k.end()), sample.support());
}

double sup_deviation(const KeySample& sample, const CdfModel& model) {
  const auto keys = sample.keys();
  const double n = static_cast<double>(keys.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i;
    while (j + 1 < keys.size() && keys[j + 1] == keys[i]) ++j;
    const double v = keys[i];
    worst = std::max(worst, std::abs(model.cdf(v) - static_cast<double>(j + 1) / n));
    worst = std::max(worst, std::abs(model.cdf_left(v) - static_cast<double>(i) / n));
    i = j + 1;
  }
  return worst;
}

double l1_deviation(const KeySample& sample, const CdfModel& model, const MeasureSpec& mu,
                    std::size_t grid) {
  if (grid < 100) throw std::domain_error("l1_deviation: grid must be >= 100");
  const Interval dom = sample.support();
  const Measure m = Measure::resolve(mu, model, dom);
  return integrate_abs_difference(Target::from_cdf(model), Target::from_cdf(ecdf_model(sample)),
                                  m, dom, grid);
}

double cvm_statistic(const KeySample& sample, const CdfModel& model) {
  const auto keys = sample.keys();
  const double n = static_cast<double>(keys.size());
  std::vector<double> terms(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double d = model.cdf(keys[i]) - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    terms[i] = d * d;
  }
  return 1.0 / (12.0 * n) + quad::pairwise_sum(terms);
}

namespace {

// log(n! pi^{n/2} / Gamma(n/2 + 1) r^n)
double log_ball(double n, double r) {
  return std::lgamma(n + 1.0) + 0.5 * n * std::log(std::numbers::pi) -
         std::lgamma(0.5 * n + 1.0) + n * std::log(r);
}

// Volume of {|x| <= r, x_1 >= d} in R^n:
// pi^{(n-1)/2} / Gamma((n+1)/2) r^n int_0^{acos(d/r)} sin^n
double cap_volume(double n, double r, double d) {
  const double theta = std::acos(d / r);
  const auto& rule = quad::gauss_legendre(32);
  const double s = quad::integrate([n](double t) { return std::pow(std::sin(t), n); }, 0.0,
                                   theta, rule);
  return std::exp(0.5 * (n - 1.0) * std::log(std::numbers::pi) - std::lgamma(0.5 * (n + 1.0)) +
                  n * std::log(r)) *
         s;
}

}  // namespace

double cvm_ball_volume(std::size_t n, double t) {
  if (n == 0) throw std::domain_error("cvm_ball_volume: n must be >= 1");
  const double nn = static_cast<double>(n);
  const double excess = t - 1.0 / (12.0 * nn);
  if (!(excess > 0.0)) return 0.0;
  return std::exp(log_ball(nn, std::sqrt(excess)));
}

double cvm_small_dev_probability(std::size_t n) {
  if (n == 0) throw std::domain_error("cvm_small_dev_probability: n must be >= 1");
  const double nn = static_cast<double>(n);
  const double r = std::sqrt(1.0 / (12.0 * nn));
  const double d = 1.0 / (2.0 * nn);
  const double ball = std::exp(log_ball(nn, r));
  if (n <= 3 || n >= 7) return ball;
  const double caps = 2.0 * cap_volume(nn, r, d);
  return ball - std::exp(std::lgamma(nn + 1.0)) * caps;
}

double dkw_expected_bound(std::size_t n) {
  if (n == 0) throw std::domain_error("dkw_expected_bound: n must be >= 1");
  return std::sqrt(std::numbers::pi / (2.0 * static_cast<double>(n)));
}

DeviationReport deviation_report(const KeySample& sample, const CdfModel& model,
                                 const MeasureSpec& mu, std::size_t grid) {
  return {sup_deviation(sample, model), l1_deviation(sample, model, mu, grid),
          cvm_statistic(sample, model)};
}

}  // namespace lidx
