#include "lidx/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lidx/quadrature.hpp"
#include "lidx/rng.hpp"

namespace lidx {
namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  std::istringstream in(s);
  T out{};
  in >> out;
  if (s.empty() || in.fail() || !in.eof())
    throw std::invalid_argument("config: bad value '" + s + "' for " + std::string(key));
  if constexpr (std::is_unsigned_v<T>)
    if (s.front() == '-')
      throw std::invalid_argument("config: negative value for " + std::string(key));
  return out;
}

std::vector<std::size_t> parse_list(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto end = comma == std::string_view::npos ? v.size() : comma;
    out.push_back(parse_number<std::size_t>(key, v.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

double mean(std::span<const double> v) {
  return v.empty() ? 0.0 : quad::pairwise_sum(v) / static_cast<double>(v.size());
}

// Unbiased variance, 0 for fewer than two values.
double variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = (v[i] - m) * (v[i] - m);
  return quad::pairwise_sum(d) / static_cast<double>(v.size() - 1);
}

bool is_log_row(BoundRow r) { return r != BoundRow::L1 && r != BoundRow::L2; }

std::optional<DensityRange> density_range(const CdfModel& f, const CdfModel& g) {
  if (!f.has_density() || !g.has_density()) return std::nullopt;
  const DensityBounds a = f.density_bounds();
  const DensityBounds b = g.density_bounds();
  if (!a.bounded_away() || !b.bounded_away()) return std::nullopt;
  return DensityRange{std::min(a.lower, b.lower), std::max(a.upper, b.upper)};
}

struct TrialStats {
  double mean_eps, max_eps, mean_steps, max_steps, mean_routing, sd_steps, baseline;
};

}  // namespace

void apply_setting(ExperimentConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "dist") {
    parse_cdf_spec(v);
    c.dist = v;
  } else if (key == "mu") {
    parse_measure_spec(v);
    c.mu = v;
  } else if (key == "n_list" || key == "n") {
    c.n_list = parse_list(key, v);
  } else if (key == "k_list" || key == "k") {
    c.k_list = parse_list(key, v);
  } else if (key == "model_class" || key == "class") {
    c.model_class = parse_model_class(v);
  } else if (key == "fit") {
    c.fit = parse_fit(v);
  } else if (key == "strategy") {
    c.strategy = parse_strategy(v);
  } else if (key == "trials") {
    c.trials = parse_number<std::size_t>(key, v);
  } else if (key == "queries_per_trial" || key == "queries") {
    c.queries_per_trial = parse_number<std::size_t>(key, v);
  } else if (key == "base_seed" || key == "seed") {
    c.base_seed = parse_number<std::uint64_t>(key, v);
  } else if (key == "grid") {
    c.grid = parse_number<std::size_t>(key, v);
  } else if (key == "output_path" || key == "output") {
    c.output_path = v;
  } else if (key == "summary_path" || key == "summary") {
    c.summary_path = v;
  } else if (key == "r_override" || key == "r") {
    if (v.empty() || v == "none")
      c.r_override.reset();
    else
      c.r_override = parse_number<double>(key, v);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value");
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void validate(const ExperimentConfig& c) {
  if (c.trials == 0) throw std::invalid_argument("config: trials must be >= 1");
  if (c.queries_per_trial == 0)
    throw std::invalid_argument("config: queries_per_trial must be >= 1");
  if (c.n_list.empty() || c.k_list.empty())
    throw std::invalid_argument("config: n_list and k_list must be non-empty");
  for (auto n : c.n_list)
    if (n == 0) throw std::invalid_argument("config: n must be >= 1");
  for (auto k : c.k_list)
    if (k == 0) throw std::invalid_argument("config: K must be >= 1");
  if (c.r_override && !(*c.r_override >= 0.0 && *c.r_override <= 1.0))
    throw std::invalid_argument("config: r_override must lie in [0,1]");
  parse_cdf_spec(c.dist);
  parse_measure_spec(c.mu);
}

std::string summary_path_for(const ExperimentConfig& c) {
  if (!c.summary_path.empty()) return c.summary_path;
  return (std::filesystem::path(c.output_path).parent_path() / "summary.csv").string();
}

bool ExperimentResult::all_satisfied() const {
  for (const auto& s : summary) {
    if (s.status != "ok") return false;
    for (const auto& r : s.reports)
      if (!r.satisfied) return false;
  }
  return true;
}

std::vector<BoundRow> applicable_rows(const ExperimentConfig& c) {
  const MeasureSpec mu = parse_measure_spec(c.mu);
  const bool matched = mu.kind == MeasureSpec::Kind::Matched;
  std::vector<BoundRow> rows;
  switch (c.strategy) {
    case SearchStrategy::Linear:
      rows.push_back(BoundRow::L1);
      if (matched) rows.push_back(BoundRow::L2);
      break;
    case SearchStrategy::Exponential: {
      const CdfModel f = parse_cdf_spec(c.dist);
      if (c.model_class == ModelClass::P0 && density_range(f, query_distribution(mu, f)))
        rows.push_back(BoundRow::E1);
      if (matched) rows.push_back(BoundRow::E2);
      break;
    }
    case SearchStrategy::Binary:
      rows.push_back(BoundRow::B1);
      if (matched) rows.push_back(BoundRow::B2);
      break;
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult out;
  out.config = cfg;
  const CdfModel f = parse_cdf_spec(cfg.dist);
  const MeasureSpec mu = parse_measure_spec(cfg.mu);
  const CdfModel g = query_distribution(mu, f);
  const std::vector<BoundRow> rows = applicable_rows(cfg);
  const std::optional<DensityRange> dens = density_range(f, g);
  std::map<std::size_t, double> r_cache;

  for (std::size_t n : cfg.n_list) {
    for (std::size_t K : cfg.k_list) {
      ConfigSummary sum;
      sum.n = n;
      sum.K = K;
      std::vector<TrialRecord> recs;
      try {
        double R = 0.0;
        if (cfg.r_override) {
          R = *cfg.r_override;
        } else if (cfg.fit == FitMethod::OptimalMatched && cfg.model_class == ModelClass::P0 &&
                   mu.kind == MeasureSpec::Kind::Matched) {
          R = 1.0 / (4.0 * static_cast<double>(K));
        } else {
          auto it = r_cache.find(K);
          if (it == r_cache.end()) {
            const std::size_t grid = std::max(cfg.grid, 20 * K);
            const double err = optimal_piecewise_dp(f, K, cfg.model_class, mu, grid).error;
            it = r_cache.emplace(K, err).first;
          }
          R = it->second;
        }
        sum.r_used = R;

        std::vector<TrialStats> stats;
        std::vector<double> baseline;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
          const KeySample keys = sample_iid(f, n, key_seed(cfg, t));
          const LearnedIndex idx = LearnedIndex::build(keys, K, cfg.model_class, cfg.strategy,
                                                       cfg.fit, {mu, cfg.grid});
          CounterRng rng(query_seed(cfg, t));
          std::vector<double> eps(cfg.queries_per_trial), steps(cfg.queries_per_trial),
              routing(cfg.queries_per_trial), base(cfg.queries_per_trial);
          for (std::size_t j = 0; j < cfg.queries_per_trial; ++j) {
            const double q = g.inverse(rng.uniform());
            const CostBreakdown c = idx.rank(q);
            eps[j] = c.epsilon;
            steps[j] = static_cast<double>(c.search_steps);
            routing[j] = static_cast<double>(c.routing_steps);
            base[j] = static_cast<double>(baseline_binary_search(keys, q).steps);
          }
          stats.push_back({mean(eps), *std::max_element(eps.begin(), eps.end()), mean(steps),
                           *std::max_element(steps.begin(), steps.end()), mean(routing),
                           std::sqrt(variance(steps)), mean(base)});
          baseline.push_back(stats.back().baseline);
        }

        std::vector<double> trial_means;
        for (const auto& s : stats) trial_means.push_back(s.mean_steps);
        sum.type_a = mean(trial_means);
        std::size_t worst = 0;
        for (std::size_t t = 0; t < stats.size(); ++t)
          if (stats[t].mean_steps > stats[worst].mean_steps) worst = t;
        sum.type_b = stats[worst].mean_steps;
        sum.type_c = 0.0;
        for (const auto& s : stats) sum.type_c = std::max(sum.type_c, s.max_steps);
        sum.baseline_mean_steps = mean(baseline);

        const double q_count = static_cast<double>(cfg.queries_per_trial);
        for (BoundRow row : rows) {
          BoundSpec spec{row, n, K, R, row == BoundRow::E1 ? dens : std::nullopt};
          const BoundStatistic st = row_statistic(row);
          double measured = 0.0;
          double slack = 0.0;
          if (st == BoundStatistic::MeanOverXQ) {
            measured = sum.type_a;
            slack = 0.5 * std::sqrt(variance(trial_means) / static_cast<double>(cfg.trials));
          } else if (st == BoundStatistic::MeanOverQWorstX) {
            measured = sum.type_b;
            slack = 0.5 * stats[worst].sd_steps / std::sqrt(q_count);
          } else {
            measured = sum.type_c;
          }
          if (is_log_row(row)) slack = 1.0;
          sum.reports.push_back(evaluate_bound(spec, measured, slack));
        }

        for (std::size_t t = 0; t < stats.size(); ++t) {
          const auto& s = stats[t];
          TrialRecord base{t, key_seed(cfg, t), n, K, cfg.model_class, cfg.fit, cfg.strategy,
                           s.mean_eps, s.max_eps, s.mean_steps, s.max_steps, s.mean_routing, R,
                           "none", std::numeric_limits<double>::quiet_NaN(), true};
          if (sum.reports.empty()) recs.push_back(base);
          for (const auto& rep : sum.reports) {
            TrialRecord r = base;
            r.bound_row = to_string(rep.spec.row);
            r.bound_value = rep.bound_value;
            const double stat =
                rep.statistic == BoundStatistic::MaxOverAll ? s.max_steps : s.mean_steps;
            r.satisfied = rep.vacuous || stat + rep.slack >= rep.bound_value;
            recs.push_back(r);
          }
        }
      } catch (const std::exception& e) {
        sum.status = std::string("error: ") + e.what();
      }
      out.trials.insert(out.trials.end(), recs.begin(), recs.end());
      out.summary.push_back(std::move(sum));
    }
  }
  return out;
}

void write_trials_csv(std::ostream& os, const ExperimentResult& r) {
  os << "schema=1\n"
     << "trial,seed,n,k,class,fit,strategy,mean_eps,max_eps,mean_search_steps,max_search_steps,"
        "mean_routing_steps,r_used,bound_row,bound_value,satisfied\n";
  for (const auto& t : r.trials) {
    os << t.trial << ',' << t.seed << ',' << t.n << ',' << t.K << ',' << to_string(t.model_class)
       << ',' << to_string(t.fit) << ',' << to_string(t.strategy) << ',' << fmt(t.mean_eps) << ','
       << fmt(t.max_eps) << ',' << fmt(t.mean_search_steps) << ',' << fmt(t.max_search_steps)
       << ',' << fmt(t.mean_routing_steps) << ',' << fmt(t.r_used) << ',' << t.bound_row << ','
       << fmt(t.bound_value) << ',' << (t.satisfied ? 1 : 0) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const ExperimentResult& r) {
  const auto& c = r.config;
  os << "schema=1\n"
     << "dist,mu,n,k,class,fit,strategy,trials,queries,r_used,type_a,type_b,type_c,"
        "baseline_mean_steps,bound_row,statistic,bound_value,table_form,measured,slack,vacuous,"
        "satisfied,status\n";
  for (const auto& s : r.summary) {
    std::ostringstream h;
    h << csv_field(c.dist) << ',' << csv_field(c.mu) << ',' << s.n << ',' << s.K << ','
      << to_string(c.model_class) << ',' << to_string(c.fit) << ',' << to_string(c.strategy) << ','
      << c.trials << ',' << c.queries_per_trial << ',' << fmt(s.r_used) << ',' << fmt(s.type_a)
      << ',' << fmt(s.type_b) << ',' << fmt(s.type_c) << ',' << fmt(s.baseline_mean_steps) << ',';
    const std::string head = h.str();
    const std::string status = csv_field(s.status);
    if (s.reports.empty()) {
      os << head << "none,,nan,nan,nan,nan,0," << (s.status == "ok" ? 1 : 0) << ',' << status
         << '\n';
      continue;
    }
    for (const auto& rep : s.reports)
      os << head << to_string(rep.spec.row) << ',' << to_string(rep.statistic) << ','
         << fmt(rep.bound_value) << ',' << fmt(rep.table_form) << ',' << fmt(rep.measured) << ','
         << fmt(rep.slack) << ',' << (rep.vacuous ? 1 : 0) << ',' << (rep.satisfied ? 1 : 0)
         << ',' << status << '\n';
  }
}

void write_outputs(const ExperimentResult& r) {
  auto write = [](const std::string& path, auto&& fn) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    fn(os);
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
  };
  write(r.config.output_path, [&](std::ostream& os) { write_trials_csv(os, r); });
  write(summary_path_for(r.config), [&](std::ostream& os) { write_summary_csv(os, r); });
}

VerifyOutcome verify_bounds(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentResult res = run_experiment(cfg);
  VerifyOutcome out;
  for (const auto& s : res.summary) {
    if (s.status != "ok") {
      log << "n=" << s.n << " k=" << s.K << " " << s.status << '\n';
      out.exit_status = 1;
      continue;
    }
    for (const auto& rep : s.reports) {
      log << "n=" << s.n << " k=" << s.K << " row=" << to_string(rep.spec.row)
          << " type=" << to_string(rep.statistic) << " R=" << fmt(rep.spec.R)
          << " bound=" << fmt(rep.bound_value) << " measured=" << fmt(rep.measured)
          << " slack=" << fmt(rep.slack)
          << (rep.vacuous ? " VACUOUS" : rep.satisfied ? " OK" : " VIOLATED");
      if (rep.statistic == BoundStatistic::MeanOverQWorstX)
        log << " (max over sampled trials; lower estimate of the worst realisation)";
      log << '\n';
      if (!rep.satisfied) out.exit_status = 1;
      out.reports.push_back(rep);
    }
  }
  return out;
}

BaselineResult baseline_binary_search(const KeySample& sample, double q) {
  const auto keys = sample.keys();
  std::size_t lo = 0;
  std::size_t hi = keys.size();
  BaselineResult r;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    ++r.steps;
    if (keys[mid - 1] <= q)
      lo = mid;
    else
      hi = mid - 1;
  }
  r.rank = lo;
  return r;
}

}  // namespace lidx
