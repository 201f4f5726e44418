// lidx: command-line front end for the learned-index toolkit.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "lidx/approx.hpp"
#include "lidx/bounds.hpp"
#include "lidx/empirical.hpp"
#include "lidx/harness.hpp"
#include "lidx/learned_index.hpp"
#include "lidx/rng.hpp"

namespace {

using namespace lidx;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct StatsArgs {
  std::string dist = "uniform:0,1";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::string mu = "matched";
  std::size_t grid = 1000;
  bool no_header = false;
};

int run_stats(const StatsArgs& a) {
  const CdfModel f = parse_cdf_spec(a.dist);
  const KeySample s = sample_iid(f, a.n, a.seed);
  const DeviationReport d = deviation_report(s, f, parse_measure_spec(a.mu), a.grid);
  if (!a.no_header) std::cout << "n,seed,sup_norm,l1_norm,cvm,dkw_bound,cvm_threshold\n";
  std::cout << a.n << ',' << a.seed << ',' << num(d.sup_norm) << ',' << num(d.l1_norm) << ','
            << num(d.cvm) << ',' << num(dkw_expected_bound(a.n)) << ','
            << num(1.0 / (6.0 * static_cast<double>(a.n))) << '\n';
  return 0;
}

struct ApproxArgs {
  std::string dist = "uniform:0,1";
  std::string mu = "matched";
  std::string cls = "p0";
  std::size_t k = 4;
  std::string method = "dp";
  std::size_t grid = 1000;
  std::string smooth = "lipschitz";
  double mconst = std::numeric_limits<double>::quiet_NaN();
};

int run_approx(const ApproxArgs& a) {
  const CdfModel f = parse_cdf_spec(a.dist);
  const MeasureSpec mu = parse_measure_spec(a.mu);
  const ModelClass cls = parse_model_class(a.cls);
  auto p0_only = [&] {
    if (cls != ModelClass::P0)
      throw std::invalid_argument("method '" + a.method + "' produces piecewise-constant fits");
  };
  ApproxResult r = [&]() -> ApproxResult {
    if (a.method == "closed") {
      p0_only();
      if (mu.kind != MeasureSpec::Kind::Matched)
        throw std::invalid_argument("the closed form needs --mu matched");
      return optimal_p0_matched(f, a.k);
    }
    if (a.method == "dp") return optimal_piecewise_dp(f, a.k, cls, mu, a.grid);
    if (a.method == "lloyd") {
      p0_only();
      return optimal_p0_general(f, query_distribution(mu, f), a.k, a.grid);
    }
    if (a.method == "interp") {
      if (cls != ModelClass::P1)
        throw std::invalid_argument("method 'interp' produces piecewise-linear fits (--class p1)");
      Smoothness s;
      if (a.smooth == "lipschitz") {
        s.kind = Smoothness::Kind::Lipschitz;
        s.constant = std::isnan(a.mconst) ? f.density_bounds().upper : a.mconst;
      } else if (a.smooth == "c2") {
        if (std::isnan(a.mconst)) throw std::invalid_argument("--smooth c2 needs --mconst");
        s.kind = Smoothness::Kind::C2;
        s.constant = a.mconst;
      } else {
        throw std::invalid_argument("unknown smoothness '" + a.smooth + "'");
      }
      if (!std::isfinite(s.constant))
        throw std::invalid_argument("density is unbounded; pass --mconst");
      return interpolation_upper_bound(f, a.k, s).approx;
    }
    throw std::invalid_argument("unknown method '" + a.method + "'");
  }();
  const double adv = a.k >= 2 ? adversarial_lower_bound(a.k).bound
                              : std::numeric_limits<double>::quiet_NaN();
  std::cout << "class,k,method,grid,error,bound_1_over_4K,adversarial_bound\n"
            << a.cls << ',' << a.k << ',' << a.method << ',' << a.grid << ',' << num(r.error) << ','
            << num(1.0 / (4.0 * static_cast<double>(a.k))) << ',' << num(adv) << '\n';
  return 0;
}

struct QueryArgs {
  std::string dist = "uniform:0,1";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::size_t k = 16;
  std::string cls = "p0";
  std::string fit = "opt";
  std::string strategy = "binary";
  std::size_t queries = 10;
  std::uint64_t qseed = 1000001;
  std::string mu = "matched";
  std::size_t grid = 1000;
};

int run_query(const QueryArgs& a) {
  const CdfModel f = parse_cdf_spec(a.dist);
  const MeasureSpec mu = parse_measure_spec(a.mu);
  const LearnedIndex idx =
      LearnedIndex::build(sample_iid(f, a.n, a.seed), a.k, parse_model_class(a.cls),
                          parse_strategy(a.strategy), parse_fit(a.fit), {mu, a.grid});
  const CdfModel g = query_distribution(mu, f);
  CounterRng rng(a.qseed);
  std::cout << "q,rank,epsilon,routing_steps,search_steps\n";
  for (std::size_t i = 0; i < a.queries; ++i) {
    const double q = g.inverse(rng.uniform());
    const CostBreakdown c = idx.rank(q);
    std::cout << num(q) << ',' << c.rank << ',' << num(c.epsilon) << ',' << c.routing_steps << ','
              << c.search_steps << '\n';
  }
  return 0;
}

struct BoundArgs {
  std::string row = "l1";
  std::size_t n = 100000;
  std::size_t k = 16;
  double r = std::numeric_limits<double>::quiet_NaN();
  double cf = std::numeric_limits<double>::quiet_NaN();
  double cff = std::numeric_limits<double>::quiet_NaN();
};

int run_bound(const BoundArgs& a) {
  BoundSpec s;
  s.row = parse_bound_row(a.row);
  s.n = a.n;
  s.K = a.k;
  s.R = std::isnan(a.r) ? 1.0 / (4.0 * static_cast<double>(a.k)) : a.r;
  std::optional<LogBoundConstants> consts;
  if (!std::isnan(a.cf) || !std::isnan(a.cff)) {
    if (std::isnan(a.cf) || std::isnan(a.cff))
      throw std::invalid_argument("--cf and --cff go together");
    s.density = DensityRange{a.cf, a.cff};
    consts = log_bound_constants(a.cf, a.cff);
  }
  const double b = table1_bound(s);
  std::cout << "row,n,k,r,bound,table_form,vacuous,vacuity_threshold\n"
            << to_string(s.row) << ',' << s.n << ',' << s.K << ',' << num(s.R) << ',' << num(b)
            << ',' << num(table1_table_form(s)) << ',' << (b > 0.0 ? 0 : 1) << ','
            << num(vacuity_threshold(s.row, s.n, consts)) << '\n';
  return 0;
}

struct SweepArgs {
  std::string config;
  std::map<std::string, std::string> overrides;
};

ExperimentConfig sweep_config(const SweepArgs& a) {
  ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  for (const auto& [k, v] : a.overrides) apply_setting(c, k, v);
  validate(c);
  return c;
}

void add_sweep_options(CLI::App* cmd, SweepArgs& a) {
  cmd->add_option("--config", a.config, "key=value experiment file")->required();
  for (const char* key : {"dist", "mu", "n", "k", "class", "fit", "strategy", "trials", "queries",
                          "seed", "grid", "output", "summary", "r"}) {
    cmd->add_option_function<std::string>(
        std::string("--") + key, [&a, key](const std::string& v) { a.overrides[key] = v; },
        std::string("override '") + key + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned-index approximation and query-cost toolkit"};
  app.require_subcommand(1);

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "ECDF deviation statistics of one sample");
  stats->add_option("--dist", st.dist, "distribution spec");
  stats->add_option("--n", st.n, "sample size");
  stats->add_option("--seed", st.seed, "sample seed");
  stats->add_option("--mu", st.mu, "query measure: lebesgue | matched | <dist spec>");
  stats->add_option("--grid", st.grid, "integration panels (>= 100)");
  stats->add_flag("--no-header", st.no_header, "omit the CSV header");

  ApproxArgs ap;
  auto* approx = app.add_subcommand("approx", "piecewise approximation error of a CDF");
  approx->add_option("--dist", ap.dist, "distribution spec");
  approx->add_option("--mu", ap.mu, "query measure");
  approx->add_option("--class", ap.cls, "p0 | p1");
  approx->add_option("--k", ap.k, "segments");
  approx->add_option("--method", ap.method, "closed | dp | lloyd | interp");
  approx->add_option("--grid", ap.grid, "grid resolution");
  approx->add_option("--smooth", ap.smooth, "interp smoothness: lipschitz | c2");
  approx->add_option("--mconst", ap.mconst, "interp smoothness constant");

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "build an index and answer random rank queries");
  query->add_option("--dist", qa.dist, "distribution spec");
  query->add_option("--n", qa.n, "keys");
  query->add_option("--seed", qa.seed, "key seed");
  query->add_option("--k", qa.k, "segments");
  query->add_option("--class", qa.cls, "p0 | p1");
  query->add_option("--fit", qa.fit, "opt | dp | interp");
  query->add_option("--strategy", qa.strategy, "linear | exp | binary");
  query->add_option("--queries", qa.queries, "number of queries");
  query->add_option("--qseed", qa.qseed, "query seed");
  query->add_option("--mu", qa.mu, "query measure");
  query->add_option("--grid", qa.grid, "dp grid");

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "evaluate a query-time lower bound");
  bound->add_option("--row", ba.row, "l1 | l2 | e1 | e2 | b1 | b2");
  bound->add_option("--n", ba.n, "keys");
  bound->add_option("--k", ba.k, "segments");
  bound->add_option("--r", ba.r, "approximation error R (default 1/(4K))");
  bound->add_option("--cf", ba.cf, "density lower bound");
  bound->add_option("--cff", ba.cff, "density upper bound");

  SweepArgs ex, ve;
  auto* experiment = app.add_subcommand("experiment", "run a sweep and write CSV output");
  add_sweep_options(experiment, ex);
  auto* verify = app.add_subcommand("verify", "run a sweep and check every applicable bound");
  add_sweep_options(verify, ve);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats) return run_stats(st);
    if (*approx) return run_approx(ap);
    if (*query) return run_query(qa);
    if (*bound) return run_bound(ba);
    if (*experiment) {
      const ExperimentResult r = run_experiment(sweep_config(ex));
      write_outputs(r);
      for (const auto& s : r.summary)
        if (s.status != "ok") std::cerr << "n=" << s.n << " k=" << s.K << ": " << s.status << '\n';
      std::cerr << "wrote " << r.config.output_path << " and " << summary_path_for(r.config)
                << '\n';
      return 0;
    }
    if (*verify) {
      const ExperimentConfig c = sweep_config(ve);
      const VerifyOutcome v = verify_bounds(c, std::cout);
      std::cout << (v.exit_status == 0 ? "PASS" : "FAIL") << '\n';
      return v.exit_status;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
