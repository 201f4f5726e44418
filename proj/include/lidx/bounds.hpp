#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace lidx {

/// Rows of the query-time lower-bound table: L = linear, E = exponential,
/// B = binary search; row 1 holds for any query measure, row 2 for dmu = dF.
enum class BoundRow { L1, L2, E1, E2, B1, B2 };

/// Which aggregate of the per-query search steps a row constrains:
/// A = mean over data and queries, B = max over data realisations of the
/// query mean, C = max over everything.
enum class BoundStatistic { MeanOverXQ, MeanOverQWorstX, MaxOverAll };

std::string to_string(BoundRow r);
std::string to_string(BoundStatistic s);
/// "l1" .. "b2", case-insensitive. Throws std::invalid_argument.
BoundRow parse_bound_row(std::string_view s);
BoundStatistic row_statistic(BoundRow r);

struct DensityRange {
  double cF = 0.0;
  double CF = 0.0;
};

struct BoundSpec {
  BoundRow row = BoundRow::L1;
  std::size_t n = 1;
  std::size_t K = 1;
  /// Approximation error R_{K,L}(F) in rank-fraction units.
  double R = 0.0;
  /// Density bounds, required for E1.
  std::optional<DensityRange> density;
};

struct LogBoundConstants {
  double C1 = 0.0;
  double C2 = 0.0;
};

/// gamma = cF / (2 CF), C1 = gamma^7 / 54, C2 = log2(8 / gamma^12).
/// Throws std::domain_error unless 0 < cF <= CF.
LogBoundConstants log_bound_constants(double cF, double CF);

/// L1 = n (R - sqrt(pi / 2n)), L2 = n (R - 1 / (sqrt 6 n)),
/// E1 = C1 (log2(nR) - C2), E2 = B2 = log2(n (R - 1 / (sqrt 6 n))),
/// B1 = log2(n (R - sqrt(pi / 2n))). Logarithmic rows return -inf when the
/// bracket is not positive. Throws std::domain_error for an invalid spec or
/// E1 without density bounds.
double table1_bound(const BoundSpec& spec);

/// E1 without the C1 factor (the displayed table form); other rows are
/// unchanged.
double table1_table_form(const BoundSpec& spec);

/// Smallest R for which the row exceeds zero. E1 needs the constants.
/// Throws std::domain_error for E1 without them.
double vacuity_threshold(BoundRow row, std::size_t n,
                         std::optional<LogBoundConstants> constants = std::nullopt);

struct BoundReport {
  BoundSpec spec;
  double bound_value = 0.0;
  double table_form = 0.0;
  double measured = 0.0;
  BoundStatistic statistic = BoundStatistic::MeanOverXQ;
  /// Allowance granted to the measured statistic (statistical or rounding).
  double slack = 0.0;
  bool satisfied = true;
  /// bound_value <= 0: nothing to verify.
  bool vacuous = false;
};

/// Fills bound_value, table_form, vacuous and satisfied
/// (measured + slack >= bound_value, or vacuous).
BoundReport evaluate_bound(const BoundSpec& spec, double measured, double slack);

}  // namespace lidx
