#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lidx/distributions.hpp"

namespace lidx {

/// Query measure mu: uniform on the support, matched to the data (dmu = dF),
/// or an explicit distribution.
struct MeasureSpec {
  enum class Kind { Lebesgue, Matched, Explicit };

  Kind kind = Kind::Matched;
  std::optional<CdfModel> model;

  static MeasureSpec lebesgue() { return {Kind::Lebesgue, std::nullopt}; }
  static MeasureSpec matched() { return {Kind::Matched, std::nullopt}; }
  static MeasureSpec explicit_cdf(CdfModel m) { return {Kind::Explicit, std::move(m)}; }

  std::string str() const;
};

/// "lebesgue" | "matched" | any distribution spec. Throws
/// std::invalid_argument.
MeasureSpec parse_measure_spec(std::string_view text);

/// A measure resolved to a density over a concrete domain.
struct Measure {
  std::function<double(double)> density;
  Interval domain;
  /// Interior points where the density is not smooth.
  std::vector<double> kinks;

  /// Resolves `spec` against the data distribution on `domain`. Matched uses
  /// the density of `data`; Explicit must put mass 1 on the domain.
  /// Throws std::domain_error (mass) or UnsupportedError (no density).
  static Measure resolve(const MeasureSpec& spec, const CdfModel& data, Interval domain);
  static Measure lebesgue(Interval domain);
  static Measure of(const CdfModel& model);
};

/// Distribution queries are drawn from under `spec` when the data follows
/// `data`.
CdfModel query_distribution(const MeasureSpec& spec, const CdfModel& data);

}  // namespace lidx
