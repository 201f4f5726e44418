#pragma once

#include <cstddef>

#include "lidx/distributions.hpp"
#include "lidx/measure.hpp"
#include "lidx/sample.hpp"

namespace lidx {

/// F_n(x) = #{keys <= x} / n.
double ecdf_eval(const KeySample& sample, double x);

/// The ECDF of `sample` as a step CdfModel over the sample's support.
CdfModel ecdf_model(const KeySample& sample);

/// Exact sup |F - F_n|, evaluated at the jumps (tie groups handled).
double sup_deviation(const KeySample& sample, const CdfModel& model);

/// Integral of |F - F_n| against mu over the support with `grid` panels,
/// split at every key. Matched means dmu = dF for `model`.
/// Throws std::domain_error for grid < 100.
double l1_deviation(const KeySample& sample, const CdfModel& model, const MeasureSpec& mu,
                    std::size_t grid);

/// omega_n^2 = 1/(12n) + sum_i (F(X_(i)) - (2i-1)/(2n))^2.
double cvm_statistic(const KeySample& sample, const CdfModel& model);

/// P(omega_n^2 <= 1/(6n)) under a continuous F.
///
/// The event is {u in [0,1]^n sorted : |u - m| <= r} with m_i = (2i-1)/(2n)
/// and r^2 = 1/(12n), so the probability is n! times the volume of the
/// ball of radius r around m clipped to the cube. For n <= 3 the ball lies
/// inside the cube and the plain ball volume is exact. For 4 <= n <= 6 the
/// ball crosses only the two faces u_1 = 0 and u_n = 1 (distance 1/(2n) from
/// m), the two caps are disjoint and their volume is subtracted exactly. For
/// n >= 7 further faces are crossed and the plain ball volume, an upper
/// bound, is returned. Evaluated in log space. Throws std::domain_error for
/// n == 0.
double cvm_small_dev_probability(std::size_t n);

/// n! pi^{n/2} / Gamma(n/2 + 1) (t - 1/(12n))^{n/2}; 0 when t <= 1/(12n).
double cvm_ball_volume(std::size_t n, double t);

/// sqrt(pi / (2n)).
double dkw_expected_bound(std::size_t n);

struct DeviationReport {
  double sup_norm = 0.0;
  double l1_norm = 0.0;
  double cvm = 0.0;
};

DeviationReport deviation_report(const KeySample& sample, const CdfModel& model,
                                 const MeasureSpec& mu, std::size_t grid);

}  // namespace lidx
