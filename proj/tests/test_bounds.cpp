#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "lidx/bounds.hpp"
#include "lidx/rng.hpp"

using namespace lidx;
using doctest::Approx;

namespace {

double bound(BoundRow row, std::size_t n, double R, std::size_t K = 16) {
  return table1_bound({row, n, K, R, std::nullopt});
}

double slope_b2(double alpha) {
  // least-squares slope of B2 against log2 n for K = n^alpha, R = 1/(4K)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int e = 10; e <= 20; ++e) {
    const auto n = std::size_t(1) << e;
    const auto K = static_cast<std::size_t>(std::llround(std::pow(double(n), alpha)));
    const double y = bound(BoundRow::B2, n, 1.0 / (4.0 * double(K)), K);
    sx += e;
    sy += y;
    sxx += double(e) * e;
    sxy += e * y;
    ++m;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void check_b2_growth(double alpha) {
  CHECK(slope_b2(alpha) == Approx(1.0 - alpha).epsilon(0.05));
  for (int e = 10; e <= 20; ++e) {
    CAPTURE(e);
    const auto n = std::size_t(1) << e;
    const auto K = static_cast<std::size_t>(std::llround(std::pow(double(n), alpha)));
    const double y = bound(BoundRow::B2, n, 1.0 / (4.0 * double(K)), K);
    CHECK(std::abs(y - ((1.0 - alpha) * e - 2.0)) <= 1.0);
  }
}

}  // namespace

TEST_CASE("row names") {
  CHECK(to_string(BoundRow::E1) == "E1");
  CHECK(parse_bound_row("b2") == BoundRow::B2);
  CHECK(parse_bound_row("L1") == BoundRow::L1);
  CHECK_THROWS_AS(parse_bound_row("x3"), std::invalid_argument);
  CHECK(row_statistic(BoundRow::L1) == BoundStatistic::MeanOverXQ);
  CHECK(row_statistic(BoundRow::L2) == BoundStatistic::MeanOverQWorstX);
  CHECK(row_statistic(BoundRow::E1) == BoundStatistic::MeanOverQWorstX);
  for (auto r : {BoundRow::E2, BoundRow::B1, BoundRow::B2})
    CHECK(row_statistic(r) == BoundStatistic::MaxOverAll);
}

TEST_CASE("table values at n = 1e5, K = 16") {
  const double R = 1.0 / 64.0;
  CHECK(bound(BoundRow::L1, 100000, R) == Approx(1166.16727023939890).epsilon(1e-12));
  CHECK(bound(BoundRow::L2, 100000, R) == Approx(1562.09175170953614).epsilon(1e-12));
  CHECK(bound(BoundRow::B2, 100000, R) == Approx(10.6092634794024154).epsilon(1e-12));
  CHECK(bound(BoundRow::E2, 100000, R) == bound(BoundRow::B2, 100000, R));
  CHECK(bound(BoundRow::B1, 100000, R) == Approx(10.1875590222888936).epsilon(1e-12));
}

TEST_CASE("log bound constants") {
  const LogBoundConstants a = log_bound_constants(1, 1);
  CHECK(a.C1 == Approx(std::pow(0.5, 7) / 54).epsilon(1e-14));
  CHECK(a.C1 == Approx(1.4468e-4).epsilon(1e-4));
  CHECK(a.C2 == Approx(15.0).epsilon(1e-14));
  const LogBoundConstants b = log_bound_constants(1, 2);
  CHECK(b.C1 == Approx(std::pow(0.25, 7) / 54).epsilon(1e-14));
  CHECK(b.C2 == Approx(27.0).epsilon(1e-14));
  CHECK_THROWS_AS(log_bound_constants(2, 1), std::domain_error);
  CHECK_THROWS_AS(log_bound_constants(0, 1), std::domain_error);

  CounterRng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double c1 = 0.05 + rng.uniform(), c2 = 0.05 + rng.uniform();
    const double C1 = 2.0 + rng.uniform();
    const auto lo = log_bound_constants(std::min(c1, c2), C1);
    const auto hi = log_bound_constants(std::max(c1, c2), C1);
    CHECK(lo.C1 <= hi.C1);
    CHECK(lo.C2 >= hi.C2);
    CHECK(hi.C1 <= 1.0 / (54.0 * 128.0) + 1e-18);
  }
}

TEST_CASE("E1 needs density bounds") {
  CHECK_THROWS_AS(bound(BoundRow::E1, 1000, 0.1), std::domain_error);
  const BoundSpec s{BoundRow::E1, 1u << 20, 4, 0.5, DensityRange{1, 1}};
  // log2(2^19) - 15 = 4
  CHECK(table1_bound(s) == Approx(4.0 * std::pow(0.5, 7) / 54).epsilon(1e-12));
  CHECK(table1_table_form(s) == Approx(4.0).epsilon(1e-12));
  CHECK(table1_table_form({BoundRow::L1, 1000, 4, 0.2, std::nullopt}) ==
        bound(BoundRow::L1, 1000, 0.2, 4));
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(bound(BoundRow::L1, 0, 0.1), std::domain_error);
  CHECK_THROWS_AS(bound(BoundRow::L1, 10, 0.1, 0), std::domain_error);
  CHECK_THROWS_AS(bound(BoundRow::L1, 10, -0.1), std::domain_error);
  CHECK_THROWS_AS(bound(BoundRow::L1, 10, 1.5), std::domain_error);
}

TEST_CASE("vacuity thresholds") {
  CHECK(vacuity_threshold(BoundRow::L1, 100000) == Approx(0.0039633272976).epsilon(1e-10));
  for (std::size_t n : {1, 7, 1000, 123456}) {
    const double nn = double(n);
    CHECK(vacuity_threshold(BoundRow::L2, n) == Approx(1.0 / (std::sqrt(6.0) * nn)));
    const double t1 = vacuity_threshold(BoundRow::L1, n);
    if (t1 >= 1.0) continue;
    CHECK(bound(BoundRow::L1, n, t1 * (1 - 1e-9)) <= 0.0);
    CHECK(bound(BoundRow::L1, n, std::min(1.0, t1 * (1 + 1e-9))) >= -1e-6);
    for (auto row : {BoundRow::B1, BoundRow::B2, BoundRow::E2}) {
      const double t = vacuity_threshold(row, n);
      if (t >= 1.0) continue;
      CHECK(bound(row, n, t) == Approx(0.0).epsilon(1e-9));
      CHECK(bound(row, n, t * 0.999) < 0.0);
      if (t * 1.001 <= 1.0) CHECK(bound(row, n, t * 1.001) > 0.0);
    }
  }
  const LogBoundConstants c = log_bound_constants(1, 1);
  CHECK(vacuity_threshold(BoundRow::E1, 1u << 20, c) == Approx(std::exp2(15.0 - 20.0)));
  CHECK_THROWS_AS(vacuity_threshold(BoundRow::E1, 100), std::domain_error);
}

TEST_CASE("vacuous brackets give negative infinity") {
  CHECK(bound(BoundRow::B1, 100, 0.01) == -INFINITY);
  CHECK(bound(BoundRow::B2, 10, 0.0) == -INFINITY);
  CHECK(bound(BoundRow::L1, 100, 0.0) < 0.0);
  const BoundReport r = evaluate_bound({BoundRow::B1, 100, 4, 0.01, std::nullopt}, 0.0, 0.0);
  CHECK(r.vacuous);
  CHECK(r.satisfied);
}

TEST_CASE("evaluate_bound semantics") {
  const BoundSpec s{BoundRow::L1, 100, 1, 0.5, std::nullopt};
  CHECK(table1_bound(s) == Approx(100 * (0.5 - std::sqrt(std::numbers::pi / 200))));
  const BoundReport ok = evaluate_bound(s, 40.0, 0.0);
  CHECK(ok.satisfied);
  CHECK_FALSE(ok.vacuous);
  const BoundReport bad = evaluate_bound(s, 1.0, 0.5);
  CHECK_FALSE(bad.satisfied);
  const BoundReport edge = evaluate_bound(s, table1_bound(s) - 0.25, 0.25);
  CHECK(edge.satisfied);
  CHECK(ok.statistic == BoundStatistic::MeanOverXQ);
}

TEST_CASE("monotone in R and linear in n") {
  for (auto row : {BoundRow::L1, BoundRow::L2, BoundRow::E2, BoundRow::B1, BoundRow::B2}) {
    double prev = -INFINITY;
    for (int i = 0; i <= 100; ++i) {
      const double v = bound(row, 5000, i / 100.0);
      CHECK(v >= prev);
      prev = v;
    }
  }
  const BoundSpec e1{BoundRow::E1, 100000, 4, 0.0, DensityRange{0.5, 1.5}};
  double prev = -INFINITY;
  for (int i = 1; i <= 100; ++i) {
    BoundSpec s = e1;
    s.R = i / 100.0;
    CHECK(table1_bound(s) >= prev);
    prev = table1_bound(s);
  }
  // n (R - c / sqrt n) for L1 and n R - 1/sqrt 6 for L2
  const double R = 0.3;
  CHECK(bound(BoundRow::L2, 2000, R) - bound(BoundRow::L2, 1000, R) == Approx(1000 * R));
  CHECK(bound(BoundRow::L2, 3000, R) - bound(BoundRow::L2, 2000, R) == Approx(1000 * R));
  CHECK(bound(BoundRow::L1, 4000, R) > bound(BoundRow::L1, 1000, R));
}

TEST_CASE("cross-row ordering") {
  CounterRng rng(44);
  for (int i = 0; i < 2000; ++i) {
    const auto n = static_cast<std::size_t>(1 + rng() % 1000000);
    const double R = rng.uniform();
    CHECK(bound(BoundRow::L2, n, R) >= bound(BoundRow::L1, n, R));
    CHECK(bound(BoundRow::E2, n, R) == bound(BoundRow::B2, n, R));
    CHECK(bound(BoundRow::B2, n, R) >= bound(BoundRow::B1, n, R));
  }
}

TEST_CASE("B2 growth for K = n^0.5") { check_b2_growth(0.5); }

TEST_CASE("B2 growth for K = n^0.9") { check_b2_growth(0.9); }
