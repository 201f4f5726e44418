#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lidx/distributions.hpp"
#include "lidx/measure.hpp"
#include "lidx/piecewise.hpp"
#include "lidx/target.hpp"

namespace lidx {

enum class ApproxMethod { ClosedForm, DpOracle, LloydQuantizer, Interpolation };

std::string to_string(ApproxMethod m);
std::string to_string(ModelClass c);

/// A fitted predictor and its L1(mu) distance to the target, in the
/// target's units (rank fraction for CDFs).
struct ApproxResult {
  PiecewiseModel model;
  double error = 0.0;
  ApproxMethod method = ApproxMethod::DpOracle;
};

/// || target - model ||_{L1(mu)} over the target support, using
/// integrate_abs_difference with `grid` panels. Throws std::domain_error if
/// grid < 1000 or if the model breakpoints do not span the support.
double l1_error(const PiecewiseModel& model, const Target& target, const Measure& mu,
                std::size_t grid);
/// Same, with mu resolved against `target` on its support.
double l1_error(const PiecewiseModel& model, const CdfModel& target, const MeasureSpec& mu,
                std::size_t grid);

/// Breakpoints F^{-1}(k/K), constants (2k-1)/(2K), error exactly 1/(4K)
/// under dmu = dF. Throws UnsupportedError for a non-invertible target.
ApproxResult optimal_p0_matched(const CdfModel& target, std::size_t K);

/// f_Y(y) = g(F^{-1}(y)) / f(F^{-1}(y)), the density of F(Q) for Q ~ g.
/// Throws SingularityError when f(F^{-1}(y)) = 0.
double pushforward_density(const CdfModel& data, const CdfModel& query, double y);

/// L1-optimal K-level quantizer of the pushforward density, found by the
/// on-grid DP in y = F(x) and mapped back through F^{-1}. The returned error
/// is measured in key space against the query measure. Throws
/// ResolutionError when the grid cannot resolve the pushforward mass.
ApproxResult optimal_p0_general(const CdfModel& data, const CdfModel& query, std::size_t K,
                                std::size_t grid);

/// Single L1-optimal affine fit on `interval`: 33x33 seed grid over a box
/// around the endpoint secant, then Nelder-Mead to a 1e-8 relative simplex.
ApproxResult best_affine_l1(const Target& target, Interval interval, const Measure& mu,
                            std::size_t grid);
ApproxResult best_affine_l1(const CdfModel& target, Interval interval, const MeasureSpec& mu,
                            std::size_t grid);

struct DpOptions {
  /// Polish each P1 segment against the exact integral after the DP.
  bool refine_affine = true;
  /// Evaluate every (i, j) cell for P0 instead of the monotone-argmin
  /// divide and conquer. Slower; used to cross-check.
  bool exhaustive = false;
  /// Candidate breakpoints used instead of the uniform grid when non-empty.
  /// Must be strictly increasing and start and end at the support ends;
  /// the >= 20K grid rule does not apply.
  std::vector<double> candidates;
};

/// Optimal K-segment fit with breakpoints restricted to the `grid` + 1
/// equally spaced nodes. P0 cells take the mu-weighted median (target must
/// be monotone); P1 cells take the weighted least-absolute-deviation line.
/// Throws std::domain_error if K > grid or grid < 20K, or if K exceeds the
/// number of candidate cells.
ApproxResult optimal_piecewise_dp(const Target& target, std::size_t K, ModelClass cls,
                                  const Measure& mu, std::size_t grid, DpOptions opts = {});
ApproxResult optimal_piecewise_dp(const CdfModel& target, std::size_t K, ModelClass cls,
                                  const MeasureSpec& mu, std::size_t grid, DpOptions opts = {});

struct AdversarialWitness {
  std::size_t steps = 0;  // M = 2(K - 1)
  double bound = 0.0;     // 1 / (64 (K - 1))
};

/// Staircase size maximising (M - K + 1) / (16 M^2) and the value there.
/// Throws std::domain_error for K < 2.
AdversarialWitness adversarial_lower_bound(std::size_t K);

struct Smoothness {
  enum class Kind { Lipschitz, C2 };
  Kind kind = Kind::Lipschitz;
  /// Lipschitz: sup |F'|. C2: sup |F''|.
  double constant = 1.0;
};

struct InterpolationResult {
  ApproxResult approx;
  double ceiling = 0.0;
};

/// Equal-width piecewise-linear fit under the normalised Lebesgue measure:
/// endpoint interpolation (Lipschitz, ceiling M L / K) or the tangent at each
/// left endpoint (C2, ceiling M L^2 / (6 K^2)). Throws InvariantViolation if
/// the measured error exceeds the ceiling.
InterpolationResult interpolation_upper_bound(const CdfModel& target, std::size_t K,
                                              Smoothness smoothness);

struct LipschitzTransform {
  CdfModel cdf;
  double normalizer = 1.0;
};

/// F_hat = (F(x) + 2x - F(0)) / (F(1) + 2 - F(0)) for a 1-Lipschitz F given
/// at x_k = k / grid, k = 0..grid. Throws std::domain_error if the values
/// are not 1-Lipschitz (tolerance 1e-12) or the count is not grid + 1.
LipschitzTransform cdf_from_lipschitz(std::span<const double> values, std::size_t grid);

}  // namespace lidx
