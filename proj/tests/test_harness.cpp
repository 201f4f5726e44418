#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "lidx/harness.hpp"
#include "lidx/rng.hpp"
#include "oracles.hpp"

using namespace lidx;

namespace {

ExperimentConfig small(std::string_view extra = "") {
  std::string text =
      "dist = uniform:0,1\n"
      "n = 2000\n"
      "k = 8\n"
      "trials = 4\n"
      "queries = 300\n";
  text += extra;
  return parse_config(text);
}

std::string trials_csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_trials_csv(os, r);
  return os.str();
}

std::string summary_csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_summary_csv(os, r);
  return os.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(
      "# sweep\n"
      "dist = logistic:0.5,0.1,0,1   # data\n"
      "mu = exp:2,0,1\n"
      "n_list = 100, 200,400\n"
      "k = 2,4\n"
      "class = p1\n"
      "fit = dp\n"
      "strategy = binary\n"
      "trials = 3\n"
      "queries_per_trial = 50\n"
      "seed = 42\n"
      "grid = 2000\n"
      "output = out/t.csv\n"
      "\n"
      "r = 0.125\n");
  CHECK(c.dist == "logistic:0.5,0.1,0,1");
  CHECK(c.mu == "exp:2,0,1");
  CHECK(c.n_list == std::vector<std::size_t>{100, 200, 400});
  CHECK(c.k_list == std::vector<std::size_t>{2, 4});
  CHECK(c.model_class == ModelClass::P1);
  CHECK(c.fit == FitMethod::Dp);
  CHECK(c.strategy == SearchStrategy::Binary);
  CHECK(c.trials == 3);
  CHECK(c.queries_per_trial == 50);
  CHECK(c.base_seed == 42);
  CHECK(c.grid == 2000);
  CHECK(c.output_path == "out/t.csv");
  CHECK(summary_path_for(c) == "out/summary.csv");
  REQUIRE(c.r_override);
  CHECK(*c.r_override == 0.125);
}

TEST_CASE("config errors carry the line number") {
  auto message = [](std::string_view text) {
    try {
      parse_config(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("n = 10\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(message("trials\n").find("line 1") != std::string::npos);
  CHECK(message("k = 4,x\n").find("line 1") != std::string::npos);
  CHECK(message("dist = normal:0,1\n").find("line 1") != std::string::npos);
  CHECK(message("strategy = jump\n") != "");
  CHECK_THROWS_AS(validate(parse_config("trials = 0\n")), std::invalid_argument);
  CHECK_THROWS_AS(validate(parse_config("r = 1.5\n")), std::invalid_argument);
  CHECK_THROWS_AS(validate(parse_config("n = 0\n")), std::invalid_argument);
}

TEST_CASE("later settings override the file") {
  ExperimentConfig c = small();
  apply_setting(c, "strategy", "exp");
  apply_setting(c, "n", "64");
  apply_setting(c, "r", "none");
  CHECK(c.strategy == SearchStrategy::Exponential);
  CHECK(c.n_list == std::vector<std::size_t>{64});
  CHECK_FALSE(c.r_override);
  // a base config is refined, not replaced
  const ExperimentConfig d = parse_config("trials = 9\n", c);
  CHECK(d.trials == 9);
  CHECK(d.strategy == SearchStrategy::Exponential);
}

TEST_CASE("seed derivation") {
  ExperimentConfig c;
  c.base_seed = 7;
  CHECK(key_seed(c, 0) == 7);
  CHECK(key_seed(c, 3) == 10);
  CHECK(query_seed(c, 3) == 1000010);
}

TEST_CASE("identical configs give byte-identical csv") {
  for (const char* st : {"linear", "exp", "binary"}) {
    const ExperimentConfig c = small(std::string("strategy = ") + st + "\n");
    const ExperimentResult a = run_experiment(c);
    const ExperimentResult b = run_experiment(c);
    CHECK(trials_csv(a) == trials_csv(b));
    CHECK(summary_csv(a) == summary_csv(b));
  }
}

TEST_CASE("csv layout") {
  const ExperimentResult r = run_experiment(small("n = 500,1000\n"));
  const auto t = lines(trials_csv(r));
  REQUIRE(t.size() >= 2);
  CHECK(t[0] == "schema=1");
  CHECK(t[1].rfind("trial,seed,n,k,class,fit,strategy,mean_eps,max_eps,mean_search_steps,"
                   "max_search_steps,mean_routing_steps,r_used,bound_row,bound_value,satisfied",
                   0) == 0);
  // linear + matched: L1 and L2 per trial, two configurations
  CHECK(t.size() == 2 + 2 * 4 * 2);
  const auto s = lines(summary_csv(r));
  CHECK(s[0] == "schema=1");
  CHECK(s.size() == 2 + 2 * 2);
  // quoted distribution field keeps the column count
  CHECK(s[2].rfind("\"uniform:0,1\",matched,500,8,", 0) == 0);
}

TEST_CASE("type A <= type B <= type C") {
  for (const char* extra : {"strategy = linear\n", "strategy = exp\n", "strategy = binary\n",
                            "dist = exp:3,0,1\nfit = interp\nclass = p1\n",
                            "dist = staircase:4\nfit = dp\nmu = lebesgue\n"}) {
    CAPTURE(extra);
    const ExperimentResult r = run_experiment(small(extra));
    for (const ConfigSummary& s : r.summary) {
      REQUIRE(s.status == "ok");
      CHECK(s.type_a <= s.type_b);
      CHECK(s.type_b <= s.type_c);
    }
  }
}

TEST_CASE("optimal uniform linear sweep satisfies its rows") {
  const ExperimentResult r =
      run_experiment(small("n = 20000\nk = 16\ntrials = 5\nqueries = 500\n"));
  REQUIRE(r.summary.size() == 1);
  const ConfigSummary& s = r.summary[0];
  CHECK(s.r_used == 1.0 / 64.0);
  REQUIRE(s.reports.size() == 2);
  for (const BoundReport& b : s.reports) {
    CHECK(b.satisfied);
    CHECK_FALSE(b.vacuous);
  }
  CHECK(r.all_satisfied());
  // about n / 64 steps on average
  CHECK(s.type_a > 20000.0 / 64 * 0.8);
  CHECK(s.type_a < 20000.0 / 64 * 1.2);
}

TEST_CASE("degenerate single key") {
  ExperimentConfig c = small("n = 1\nk = 1\n");
  for (const char* st : {"linear", "exp", "binary"}) {
    apply_setting(c, "strategy", st);
    const ExperimentResult r = run_experiment(c);
    REQUIRE(r.summary.size() == 1);
    CHECK(r.summary[0].status == "ok");
    CHECK(r.summary[0].type_c <= 2.0);
  }
}

TEST_CASE("inflated R is reported as a violation") {
  const ExperimentConfig c = small("n = 100\nk = 16\nr = 0.5\n");
  const ExperimentResult r = run_experiment(c);
  const BoundReport& l1 = r.summary[0].reports[0];
  CHECK(l1.spec.row == BoundRow::L1);
  CHECK(l1.bound_value == doctest::Approx(100 * (0.5 - std::sqrt(std::acos(-1.0) / 200))));
  CHECK_FALSE(l1.satisfied);
  std::ostringstream log;
  const VerifyOutcome v = verify_bounds(c, log);
  CHECK(v.exit_status == 1);
  CHECK(log.str().find("VIOLATED") != std::string::npos);
}

TEST_CASE("vacuous configuration passes") {
  std::ostringstream log;
  const VerifyOutcome v = verify_bounds(small("n = 10\nk = 10\n"), log);
  CHECK(v.exit_status == 0);
  REQUIRE_FALSE(v.reports.empty());
  for (const BoundReport& b : v.reports) CHECK(b.vacuous);
  CHECK(log.str().find("VACUOUS") != std::string::npos);
}

TEST_CASE("module errors do not abort the sweep") {
  const ExperimentResult r = run_experiment(small("n = 5,2000\nk = 8\n"));
  REQUIRE(r.summary.size() == 2);
  CHECK(r.summary[0].status.rfind("error:", 0) == 0);
  CHECK(r.summary[1].status == "ok");
  CHECK_FALSE(r.all_satisfied());
  std::ostringstream log;
  CHECK(verify_bounds(small("n = 5\nk = 8\n"), log).exit_status == 1);
}

TEST_CASE("rows follow strategy and measure") {
  ExperimentConfig c;
  CHECK(applicable_rows(c) == std::vector<BoundRow>{BoundRow::L1, BoundRow::L2});
  c.strategy = SearchStrategy::Binary;
  CHECK(applicable_rows(c) == std::vector<BoundRow>{BoundRow::B1, BoundRow::B2});
  c.mu = "lebesgue";
  CHECK(applicable_rows(c) == std::vector<BoundRow>{BoundRow::B1});
  c.strategy = SearchStrategy::Exponential;
  c.mu = "matched";
  CHECK(applicable_rows(c) == std::vector<BoundRow>{BoundRow::E1, BoundRow::E2});
  c.model_class = ModelClass::P1;
  CHECK(applicable_rows(c) == std::vector<BoundRow>{BoundRow::E2});
  c.model_class = ModelClass::P0;
  c.dist = "pow:2";  // density vanishes at 0
  CHECK(applicable_rows(c) == std::vector<BoundRow>{BoundRow::E2});
}

TEST_CASE("baseline binary search") {
  const KeySample s = sample_iid(CdfModel::uniform(0, 1), 1024, 3);
  CounterRng rng(8);
  for (int i = 0; i < 5000; ++i) {
    const double q = rng.uniform();
    const BaselineResult b = baseline_binary_search(s, q);
    CHECK(b.rank == oracle::rank(s.keys(), q));
    CHECK(b.steps <= 11);
  }
  const KeySample one = sample_iid(CdfModel::uniform(0, 1), 1, 3);
  CHECK(baseline_binary_search(one, 0.5).steps == 1);
  CHECK(baseline_binary_search(one, one[0]).rank == 1);
}

TEST_CASE("write_outputs creates both files") {
  const auto dir = std::filesystem::temp_directory_path() / "lidx_harness_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ExperimentConfig c = small("trials = 2\nqueries = 50\n");
  c.output_path = (dir / "t.csv").string();
  const ExperimentResult r = run_experiment(c);
  write_outputs(r);
  std::ifstream t(dir / "t.csv"), s(dir / "summary.csv");
  REQUIRE(t.good());
  REQUIRE(s.good());
  std::stringstream tb;
  tb << t.rdbuf();
  CHECK(tb.str() == trials_csv(r));
  c.output_path = (dir / "new" / "deeper" / "t.csv").string();
  ExperimentResult moved = r;
  moved.config = c;
  write_outputs(moved);
  CHECK(std::filesystem::exists(dir / "new" / "deeper" / "summary.csv"));
  // a regular file in the way
  c.output_path = (dir / "t.csv" / "x.csv").string();
  ExperimentResult blocked = r;
  blocked.config = c;
  CHECK_THROWS_AS(write_outputs(blocked), std::runtime_error);
  std::filesystem::remove_all(dir);
}
