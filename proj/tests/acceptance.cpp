// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lidx/approx.hpp"
#include "lidx/empirical.hpp"
#include "lidx/harness.hpp"
#include "lidx/rng.hpp"
#include "oracles.hpp"

using namespace lidx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. closed form 1/(4K), and the P0 DP close to it
Outcome closed_form() {
  Outcome o;
  double worst_dp = 0.0;
  for (const char* spec : {"uniform:0,1", "logistic:0.5,0.1,0,1", "exp:2,0,1"}) {
    const CdfModel f = parse_cdf_spec(spec);
    for (std::size_t K : {1, 2, 5, 16, 64}) {
      const double e = optimal_p0_matched(f, K).error;
      if (e != 1.0 / (4.0 * double(K))) {
        o.pass = false;
        o.detail += fmt("%s K=%zu closed form %.17g; ", spec, K, e);
      }
      if (K > 16) continue;
      const double d =
          optimal_piecewise_dp(f, K, ModelClass::P0, MeasureSpec::matched(), 10000).error;
      worst_dp = std::max(worst_dp, std::abs(d - 1.0 / (4.0 * double(K))));
    }
  }
  if (worst_dp > 2e-3) o.pass = false;
  o.detail += fmt("max |dp - 1/(4K)| = %.3g (K <= 16, grid 1e4)", worst_dp);
  return o;
}

// 2. best affine fit of x^2
Outcome affine_oracle() {
  const ApproxResult r =
      best_affine_l1(CdfModel::power_law(2), {0, 1}, MeasureSpec::lebesgue(), 1000);
  const Segment s = r.model.segments()[0];
  Outcome o;
  o.pass = std::abs(r.error - 1.0 / 16.0) <= 1e-4 && std::abs(s.slope - 1.0) <= 1e-3 &&
           std::abs(s.intercept + 3.0 / 16.0) <= 1e-3;
  o.detail = fmt("error %.10f slope %.6f intercept %.6f", r.error, s.slope, s.intercept);
  return o;
}

// 3. staircase witness against the P1 DP
Outcome adversarial() {
  Outcome o;
  for (std::size_t K : {2, 5, 9}) {
    const AdversarialWitness w = adversarial_lower_bound(K);
    const double e = optimal_piecewise_dp(CdfModel::staircase(w.steps), K, ModelClass::P1,
                                          MeasureSpec::lebesgue(), 1280)
                         .error;
    const bool ok = e >= 1.0 / (64.0 * double(K - 1)) - 2e-3 && double(K) * e >= 1.0 / 64 - 2e-3;
    o.pass = o.pass && ok;
    o.detail += fmt("K=%zu M=%zu err %.5f bound %.5f K*err %.4f; ", K, w.steps, e, w.bound,
                    double(K) * e);
  }
  return o;
}

// 4. mean sup deviation against sqrt(pi / 2n)
Outcome dkw() {
  const CdfModel u = CdfModel::uniform(0, 1);
  std::vector<double> d;
  for (std::uint64_t t = 0; t < 200; ++t) d.push_back(sup_deviation(sample_iid(u, 1000, t), u));
  double m = 0.0, v = 0.0;
  for (double x : d) m += x;
  m /= double(d.size());
  for (double x : d) v += (x - m) * (x - m);
  const double se = std::sqrt(v / double(d.size() - 1) / double(d.size()));
  const double cap = dkw_expected_bound(1000) + 3.0 * se;
  return {m <= cap, fmt("mean %.5f <= %.5f + 3*%.5f", m, dkw_expected_bound(1000), se)};
}

// 5. Monte Carlo frequency of the small-deviation event at n = 5
Outcome cvm_frequency() {
  const CdfModel u = CdfModel::uniform(0, 1);
  const std::size_t trials = 1000000;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t)
    hits += cvm_statistic(sample_iid(u, 5, 5000000 + t), u) <= 1.0 / 30.0 ? 1 : 0;
  const double p = cvm_small_dev_probability(5);
  const auto ci = oracle::binomial99(p, double(trials));
  const double freq = double(hits) / double(trials);
  return {freq >= ci.lo && freq <= ci.hi,
          fmt("freq %.6f, P %.6f, 99%% interval [%.6f, %.6f]", freq, p, ci.lo, ci.hi)};
}

ExperimentConfig table_config(SearchStrategy s) {
  ExperimentConfig c;
  c.dist = "uniform:0,1";
  c.mu = "matched";
  c.n_list = {100000};
  c.k_list = {16};
  c.model_class = ModelClass::P0;
  c.fit = FitMethod::OptimalMatched;
  c.strategy = s;
  c.trials = 20;
  c.queries_per_trial = 2000;
  return c;
}

const BoundReport* find_row(const ConfigSummary& s, BoundRow row) {
  for (const BoundReport& r : s.reports)
    if (r.spec.row == row) return &r;
  return nullptr;
}

// 6. L1 row, grand mean of linear-search steps
Outcome table_l1() {
  const ExperimentResult r = run_experiment(table_config(SearchStrategy::Linear));
  const ConfigSummary& s = r.summary.at(0);
  const BoundReport* l1 = find_row(s, BoundRow::L1);
  if (!l1) return {false, "no L1 report: " + s.status};
  return {l1->satisfied && !l1->vacuous,
          fmt("mean steps %.2f >= %.2f - slack %.3f (n/64 = %.1f)", l1->measured,
              l1->bound_value, l1->slack, 100000.0 / 64)};
}

// 7. B2 row, global max of binary-search steps; ranks checked independently
Outcome table_b2() {
  const ExperimentConfig c = table_config(SearchStrategy::Binary);
  const ExperimentResult r = run_experiment(c);
  const ConfigSummary& s = r.summary.at(0);
  const BoundReport* b2 = find_row(s, BoundRow::B2);
  if (!b2) return {false, "no B2 report: " + s.status};
  const CdfModel f = parse_cdf_spec(c.dist);
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    const KeySample keys = sample_iid(f, c.n_list[0], key_seed(c, t));
    const LearnedIndex idx = LearnedIndex::build(keys, c.k_list[0], c.model_class, c.strategy,
                                                 c.fit, {MeasureSpec::matched(), c.grid});
    CounterRng rng(query_seed(c, t));
    for (std::size_t j = 0; j < c.queries_per_trial; ++j) {
      const double q = f.inverse(rng.uniform());
      if (idx.rank(q).rank != baseline_binary_search(keys, q).rank) ++wrong;
    }
  }
  const bool ok = b2->measured >= b2->bound_value - 1.0 && wrong == 0;
  return {ok, fmt("max steps %.0f >= %.4f - 1, rank mismatches %zu", b2->measured,
                  b2->bound_value, wrong)};
}

// 8. per-query search cost envelopes over 12 configurations
Outcome envelopes() {
  struct Cfg {
    const char* dist;
    ModelClass cls;
    FitMethod fit;
    std::size_t K;
  };
  std::vector<Cfg> cfgs;
  for (const char* d : {"uniform:0,1", "logistic:0.5,0.1,0,1", "exp:3,0,1", "staircase:4"}) {
    cfgs.push_back({d, ModelClass::P0, FitMethod::OptimalMatched, 16});
    cfgs.push_back({d, ModelClass::P1, FitMethod::Dp, 8});
    cfgs.push_back({d, ModelClass::P1, FitMethod::EqualWidthInterp, 32});
  }
  std::size_t violations = 0, checked = 0, wrong = 0;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const Cfg& c = cfgs[i];
    const KeySample keys = sample_iid(parse_cdf_spec(c.dist), 5000, 100 + i);
    const BuildOptions opts{MeasureSpec::matched(), 20 * c.K};
    auto build = [&](SearchStrategy s) {
      return LearnedIndex::build(keys, c.K, c.cls, s, c.fit, opts);
    };
    const LearnedIndex lin = build(SearchStrategy::Linear);
    const LearnedIndex ex = build(SearchStrategy::Exponential);
    const LearnedIndex bin = build(SearchStrategy::Binary);
    const double cap_bin = std::ceil(std::log2(2.0 * double(bin.window()) + 2.0));
    CounterRng rng(200 + i);
    for (int j = 0; j < 10000; ++j) {
      const double q = keys.support().lo + keys.support().length() * rng.uniform();
      const std::size_t truth = oracle::rank(keys.keys(), q);
      const CostBreakdown a = lin.rank(q), b = ex.rank(q), d = bin.rank(q);
      if (a.rank != truth || b.rank != truth || d.rank != truth) ++wrong;
      const double le = std::log2(std::max(2.0, b.epsilon));
      if (double(a.search_steps) < std::floor(a.epsilon)) ++violations;
      const double be = double(b.search_steps);
      if (be < le || be > 2 * std::ceil(le) + 3) ++violations;
      if (double(d.search_steps) > cap_bin) ++violations;
      checked += 3;
    }
  }
  return {violations == 0 && wrong == 0,
          fmt("%zu configurations, %zu checks, %zu violations, %zu wrong ranks", cfgs.size(),
              checked, violations, wrong)};
}

// 9. DP error is linear in the target scale
Outcome scaling() {
  CounterRng rng(9);
  double worst = 0.0;
  DpOptions opts;
  opts.refine_affine = false;
  for (int t = 0; t < 5; ++t) {
    std::vector<double> xs{0.0}, ys{0.0};
    for (int i = 1; i <= 12; ++i) {
      xs.push_back(i / 12.0);
      ys.push_back(ys.back() + 0.05 + rng.uniform());
    }
    const Target g = Target::piecewise_linear(xs, ys);
    const Measure mu = Measure::lebesgue({0, 1});
    for (ModelClass cls : {ModelClass::P0, ModelClass::P1}) {
      const double base = optimal_piecewise_dp(g, 4, cls, mu, 200, opts).error;
      for (double lambda : {2.0, 10.0}) {
        const double e = optimal_piecewise_dp(g.scaled(lambda), 4, cls, mu, 200, opts).error;
        worst = std::max(worst, std::abs(e - lambda * base) / (lambda * base));
      }
    }
  }
  return {worst <= 1e-9, fmt("max relative deviation %.3g over 5 targets, P0 and P1", worst)};
}

// 10. Lipschitz-to-CDF transform keeps the approximation hardness
Outcome lipschitz() {
  const std::size_t grid = 1000;
  std::vector<std::pair<std::string, std::function<double(double)>>> inputs;
  for (int k : {1, 2, 4, 8}) {
    inputs.emplace_back(fmt("triangle x%d", k), [k](double x) {
      const double p = 1.0 / k;
      const double r = std::fmod(x, p);
      return std::min(r, p - r);
    });
  }
  for (int k : {1, 3}) {
    inputs.emplace_back(fmt("sine %d", k), [k](double x) {
      const double w = 2.0 * std::numbers::pi * k;
      return std::sin(w * x) / w;
    });
  }
  for (std::uint64_t seed : {1, 2}) {
    std::vector<double> walk{0.0};
    CounterRng rng(seed);
    for (std::size_t i = 0; i < grid; ++i)
      walk.push_back(walk.back() + (rng.uniform() < 0.5 ? 1.0 : -1.0) / double(grid));
    inputs.emplace_back(fmt("walk %llu", (unsigned long long)seed), [walk, grid](double x) {
      return walk[static_cast<std::size_t>(std::llround(x * double(grid)))];
    });
  }
  inputs.emplace_back("parabola", [](double x) { return x * (1.0 - x); });
  inputs.emplace_back("vee", [](double x) { return -std::abs(x - 0.3); });

  Outcome o;
  double min_ratio = INFINITY;
  std::vector<double> xs(grid + 1);
  for (std::size_t k = 0; k <= grid; ++k) xs[k] = double(k) / double(grid);
  for (const auto& [name, fn] : inputs) {
    std::vector<double> v(grid + 1);
    for (std::size_t k = 0; k <= grid; ++k) v[k] = fn(xs[k]);
    const LipschitzTransform t = cdf_from_lipschitz(v, grid);
    bool shape = t.cdf.cdf(0.0) == 0.0 && std::abs(t.cdf.cdf(1.0) - 1.0) <= 1e-15 &&
                 t.normalizer >= 1.0 && t.normalizer <= 3.0;
    for (std::size_t k = 0; k < grid; ++k) shape = shape && t.cdf.cdf(xs[k + 1]) > t.cdf.cdf(xs[k]);
    const Measure leb = Measure::lebesgue({0, 1});
    const double e_in = best_affine_l1(Target::piecewise_linear(xs, v), {0, 1}, leb, grid).error;
    const double e_out = best_affine_l1(Target::from_cdf(t.cdf), {0, 1}, leb, grid).error;
    const double ratio = e_out / e_in;
    min_ratio = std::min(min_ratio, ratio);
    if (!shape || ratio < 1.0 / 3.0 - 1e-2) {
      o.pass = false;
      o.detail += fmt("%s: shape %d ratio %.4f; ", name.c_str(), int(shape), ratio);
    }
  }
  o.detail += fmt("%zu inputs, min hardness ratio %.4f (>= %.4f)", inputs.size(), min_ratio,
                  1.0 / 3.0 - 1e-2);
  return o;
}

// 11. mismatched quantization coefficient
Outcome quantization() {
  const double e =
      optimal_p0_general(CdfModel::uniform(0, 1), CdfModel::power_law(2), 64, 16384).error;
  const double c = 64.0 * e;
  return {std::abs(c - 2.0 / 9.0) <= 0.1 * 2.0 / 9.0, fmt("K*err %.6f vs 2/9 = %.6f", c, 2.0 / 9)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"closed-form recovery", closed_form},
      {"affine oracle", affine_oracle},
      {"adversarial witness", adversarial},
      {"DKW expectation", dkw},
      {"CvM frequency", cvm_frequency},
      {"L1 row, linear search", table_l1},
      {"B2 row, binary search", table_b2},
      {"search cost envelopes", envelopes},
      {"scaling", scaling},
      {"Lipschitz transform", lipschitz},
      {"mismatched quantization", quantization},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
