#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lidx/bounds.hpp"
#include "lidx/learned_index.hpp"

namespace lidx {

/// One sweep over n_list x k_list with everything else fixed.
struct ExperimentConfig {
  std::string dist = "uniform:0,1";
  std::string mu = "matched";
  std::vector<std::size_t> n_list{1000};
  std::vector<std::size_t> k_list{16};
  ModelClass model_class = ModelClass::P0;
  FitMethod fit = FitMethod::OptimalMatched;
  SearchStrategy strategy = SearchStrategy::Linear;
  std::size_t trials = 10;
  std::size_t queries_per_trial = 1000;
  std::uint64_t base_seed = 1;
  std::size_t grid = 1000;
  std::string output_path = "trials.csv";
  /// Empty: summary.csv next to output_path.
  std::string summary_path;
  /// Use this R instead of computing it.
  std::optional<double> r_override;
};

/// Sets one field from its textual value. Keys are the field names
/// ("class" is accepted for model_class, "r" for r_override, "n"/"k" for the
/// lists). Throws std::invalid_argument for unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// key=value lines, '#' starts a comment. Throws std::invalid_argument with
/// the line number on error.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
/// Throws std::invalid_argument if a field violates its precondition.
void validate(const ExperimentConfig& cfg);
std::string summary_path_for(const ExperimentConfig& cfg);

/// Key seed of trial t; the query seed adds 10^6 so the two never overlap.
inline std::uint64_t key_seed(const ExperimentConfig& c, std::size_t t) { return c.base_seed + t; }
inline std::uint64_t query_seed(const ExperimentConfig& c, std::size_t t) {
  return c.base_seed + t + 1000000;
}

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t K = 0;
  ModelClass model_class = ModelClass::P0;
  FitMethod fit = FitMethod::OptimalMatched;
  SearchStrategy strategy = SearchStrategy::Linear;
  double mean_eps = 0.0;
  double max_eps = 0.0;
  double mean_search_steps = 0.0;
  double max_search_steps = 0.0;
  double mean_routing_steps = 0.0;
  double r_used = 0.0;
  std::string bound_row;  // "none" when no row applies
  double bound_value = 0.0;
  /// This trial's statistic for the row (mean for A/B, max for C) plus the
  /// row slack reaches the bound. The verdict is the summary's.
  bool satisfied = true;
};

/// Aggregates of one (n, K) configuration.
struct ConfigSummary {
  std::size_t n = 0;
  std::size_t K = 0;
  double r_used = 0.0;
  /// A: grand mean of search steps, B: max of trial means, C: global max.
  double type_a = 0.0;
  double type_b = 0.0;
  double type_c = 0.0;
  double baseline_mean_steps = 0.0;
  std::vector<BoundReport> reports;
  /// "ok" or "error: <message>" when a module error aborted the configuration.
  std::string status = "ok";
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::vector<ConfigSummary> summary;

  bool all_satisfied() const;
};

/// Rows applicable to the configuration: linear L1 (+ L2 when matched),
/// exponential E1 (P0 with densities bounded away from 0 and infinity) and
/// E2 when matched, binary B1 (+ B2 when matched).
std::vector<BoundRow> applicable_rows(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_trials_csv(std::ostream& os, const ExperimentResult& r);
void write_summary_csv(std::ostream& os, const ExperimentResult& r);
/// Writes both files named in the config, creating parent directories.
/// Throws std::runtime_error on I/O failure.
void write_outputs(const ExperimentResult& r);

struct VerifyOutcome {
  std::vector<BoundReport> reports;
  /// 0 when every non-vacuous applicable bound holds and no configuration
  /// failed, else 1.
  int exit_status = 0;
};

/// Runs the experiment, prints one line per (configuration, row) to `log`.
VerifyOutcome verify_bounds(const ExperimentConfig& cfg, std::ostream& log);

struct BaselineResult {
  std::size_t rank = 0;
  std::size_t steps = 0;
};

/// Plain binary search over the whole key array, counting key reads.
BaselineResult baseline_binary_search(const KeySample& sample, double q);

}  // namespace lidx
