#include "lidx/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lidx {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dkw(double n) { return std::sqrt(std::numbers::pi / (2.0 * n)); }
double matched(double n) { return 1.0 / (std::sqrt(6.0) * n); }

double log2_positive(double x) { return x > 0.0 ? std::log2(x) : kNegInf; }

void validate(const BoundSpec& s) {
  if (s.n == 0) throw std::domain_error("BoundSpec: n must be >= 1");
  if (s.K == 0) throw std::domain_error("BoundSpec: K must be >= 1");
  if (!(s.R >= 0.0 && s.R <= 1.0)) throw std::domain_error("BoundSpec: R must lie in [0,1]");
}

}  // namespace

std::string to_string(BoundRow r) {
  switch (r) {
    case BoundRow::L1: return "L1";
    case BoundRow::L2: return "L2";
    case BoundRow::E1: return "E1";
    case BoundRow::E2: return "E2";
    case BoundRow::B1: return "B1";
    case BoundRow::B2: return "B2";
  }
  return "?";
}

std::string to_string(BoundStatistic s) {
  switch (s) {
    case BoundStatistic::MeanOverXQ: return "A";
    case BoundStatistic::MeanOverQWorstX: return "B";
    case BoundStatistic::MaxOverAll: return "C";
  }
  return "?";
}

BoundRow parse_bound_row(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "l1") return BoundRow::L1;
  if (t == "l2") return BoundRow::L2;
  if (t == "e1") return BoundRow::E1;
  if (t == "e2") return BoundRow::E2;
  if (t == "b1") return BoundRow::B1;
  if (t == "b2") return BoundRow::B2;
  throw std::invalid_argument("unknown bound row '" + std::string(s) + "'");
}

BoundStatistic row_statistic(BoundRow r) {
  switch (r) {
    case BoundRow::L1: return BoundStatistic::MeanOverXQ;
    case BoundRow::L2:
    case BoundRow::E1: return BoundStatistic::MeanOverQWorstX;
    case BoundRow::E2:
    case BoundRow::B1:
    case BoundRow::B2: return BoundStatistic::MaxOverAll;
  }
  return BoundStatistic::MaxOverAll;
}

LogBoundConstants log_bound_constants(double cF, double CF) {
  if (!(cF > 0.0) || !(CF >= cF) || !std::isfinite(CF))
    throw std::domain_error("log_bound_constants: need 0 < cF <= CF < inf");
  const double g = cF / (2.0 * CF);
  return {std::pow(g, 7) / 54.0, std::log2(8.0 / std::pow(g, 12))};
}

double table1_bound(const BoundSpec& spec) {
  validate(spec);
  const double n = static_cast<double>(spec.n);
  const double R = spec.R;
  switch (spec.row) {
    case BoundRow::L1: return n * (R - dkw(n));
    case BoundRow::L2: return n * (R - matched(n));
    case BoundRow::E1: {
      if (!spec.density) throw std::domain_error("table1_bound: E1 needs density bounds");
      const auto c = log_bound_constants(spec.density->cF, spec.density->CF);
      return c.C1 * (log2_positive(n * R) - c.C2);
    }
    case BoundRow::E2:
    case BoundRow::B2: return log2_positive(n * (R - matched(n)));
    case BoundRow::B1: return log2_positive(n * (R - dkw(n)));
  }
  return kNegInf;
}

double table1_table_form(const BoundSpec& spec) {
  if (spec.row != BoundRow::E1) return table1_bound(spec);
  validate(spec);
  if (!spec.density) throw std::domain_error("table1_table_form: E1 needs density bounds");
  const auto c = log_bound_constants(spec.density->cF, spec.density->CF);
  return log2_positive(static_cast<double>(spec.n) * spec.R) - c.C2;
}

double vacuity_threshold(BoundRow row, std::size_t n, std::optional<LogBoundConstants> constants) {
  if (n == 0) throw std::domain_error("vacuity_threshold: n must be >= 1");
  const double nn = static_cast<double>(n);
  switch (row) {
    case BoundRow::L1: return dkw(nn);
    case BoundRow::L2: return matched(nn);
    // log2 of the bracket is positive once the bracket exceeds 1
    case BoundRow::B1: return dkw(nn) + 1.0 / nn;
    case BoundRow::E2:
    case BoundRow::B2: return matched(nn) + 1.0 / nn;
    case BoundRow::E1:
      if (!constants) throw std::domain_error("vacuity_threshold: E1 needs the constants");
      return std::exp2(constants->C2) / nn;
  }
  return 0.0;
}

BoundReport evaluate_bound(const BoundSpec& spec, double measured, double slack) {
  BoundReport r;
  r.spec = spec;
  r.bound_value = table1_bound(spec);
  r.table_form = table1_table_form(spec);
  r.measured = measured;
  r.statistic = row_statistic(spec.row);
  r.slack = slack;
  r.vacuous = !(r.bound_value > 0.0);
  r.satisfied = r.vacuous || measured + slack >= r.bound_value;
  return r;
}

}  // namespace lidx
