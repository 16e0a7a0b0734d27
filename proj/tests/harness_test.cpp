#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nts/harness.hpp"

using namespace nts;

namespace {

ExperimentSpec walk_spec() {
  ExperimentSpec s;
  s.name = "t";
  s.tree = "completeb:2,5,5";
  s.algo = AlgoId::kWalk;
  s.model.q = 0.0;
  s.trials = 50;
  s.seed = 3;
  return s;
}

}  // namespace

TEST_CASE("noiseless walk: mean is the depth, standard error zero") {
  ResultRow row = run(walk_spec(), 2);
  CHECK(row.moves.present);
  CHECK(row.moves.mean == doctest::Approx(5.0));
  CHECK(row.moves.stderror == doctest::Approx(0.0));
  CHECK(row.queries.mean == doctest::Approx(6.0));
  CHECK(row.moves.median == doctest::Approx(5.0));
  CHECK(row.moves.p95 == doctest::Approx(5.0));
  CHECK(row.censored_fraction == doctest::Approx(0.0));
}

TEST_CASE("identical spec and seed give identical rows at any worker count") {
  ExperimentSpec s;
  s.name = "det";
  s.tree = "complete:5,4,4";
  s.algo = AlgoId::kWalk;
  s.model.q = 0.12;
  s.trials = 3000;
  s.seed = 9;
  std::string a = csv_row(run(s, 1));
  std::string b = csv_row(run(s, 1));
  std::string c = csv_row(run(s, 7));
  CHECK(a == b);
  CHECK(a == c);

  // the environment cap changes scheduling only, never results
  setenv("NTS_THREADS", "2", 1);
  std::string d = csv_row(run(s, 0));
  unsetenv("NTS_THREADS");
  CHECK(a == d);
}

TEST_CASE("monte-carlo mean sits on the exact oracle") {
  ExperimentSpec s;
  s.name = "oracle";
  s.tree = "star:5,2";
  s.algo = AlgoId::kNatural;
  s.model.q = 0.4;
  s.trials = 60000;
  s.seed = 4;
  ResultRow row = run(s, 0);
  Tree t = make_from_spec(s.tree);
  NoiseModel m = NoiseModel::uniform(t, s.model.q);
  double exact = static_cast<double>(exact_expected_cost(
      t, m, AlgoId::kNatural, Metric::kQueries, s.params));
  CHECK(std::abs(row.queries.mean - exact) <=
        3 * row.queries.stderror + 1e-9);
}

TEST_CASE("standard errors are honest across trial counts") {
  ExperimentSpec s;
  s.name = "se";
  s.tree = "complete:4,5,5";
  s.algo = AlgoId::kWalk;
  s.model.q = 0.06;
  s.seed = 11;
  s.metrics = {Metric::kMoves};
  double mean[3], se[3];
  std::uint64_t trials[3] = {1000, 10000, 100000};
  for (int i = 0; i < 3; ++i) {
    s.trials = trials[i];
    ResultRow row = run(s, 0);
    mean[i] = row.moves.mean;
    se[i] = row.moves.stderror;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(std::abs(mean[i] - mean[j]) <= 3 * std::hypot(se[i], se[j]));
}

TEST_CASE("metric and parameter validation") {
  ExperimentSpec s = walk_spec();
  s.algo = AlgoId::kPf;
  s.metrics = {Metric::kQueries};
  CHECK_THROWS_AS(validate(s), Error);
  s.metrics = {Metric::kMoves};
  s.params.lambda = 0.0;
  CHECK_THROWS_AS(validate(s), Error);
  s.params.lambda = 0.75;
  CHECK_NOTHROW(validate(s));

  s = walk_spec();
  s.algo = AlgoId::kSep;
  s.metrics = {Metric::kMoves};
  CHECK_THROWS_AS(validate(s), Error);

  s = walk_spec();
  s.trials = 0;
  CHECK_THROWS_AS(validate(s), Error);
  s = walk_spec();
  s.model.q = 1.5;
  CHECK_THROWS_AS(validate(s), Error);
  s = walk_spec();
  s.model.text = "voodoo";
  CHECK_THROWS_AS(validate(s), Error);
}

TEST_CASE("budget applies to materialized trees; complete families scale") {
  ExperimentSpec s;
  s.tree = "completeb:10,6,6";  // 1,111,111 nodes if materialized
  s.model.q = 0.05;
  s.trials = 20;
  s.seed = 1;
  s.algo = AlgoId::kWalk;  // runs on the arithmetic tree
  ResultRow row = run(s, 2);
  CHECK(row.moves.mean >= 6.0);
  s.algo = AlgoId::kLoop;  // needs the materialized tree
  CHECK_THROWS_AS(run(s, 2), Error);
}

TEST_CASE("censoring is reported, never silently dropped") {
  ExperimentSpec s;
  s.name = "cens";
  s.tree = "completeb:3,3";
  s.algo = AlgoId::kPf;
  s.model.q = 0.8;
  s.params.lambda = 0.5;
  s.params.step_cap = 4;
  s.trials = 4000;
  s.seed = 6;
  ResultRow row = run(s, 0);
  CHECK(row.censored_fraction > 0.0);
  CHECK(row.moves.present);
  CHECK(row.moves.mean <= 4.0);  // stats cover the uncensored sample only
}

TEST_CASE("sweeps preserve order and produce one row per value") {
  ExperimentSpec base = walk_spec();
  CHECK(sweep("q", {}, base, 1).empty());
  auto rows = sweep("q", {"0", "0.1", "0.2", "0.3", "0.5"}, base, 0);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].spec.model.q == doctest::Approx(0.0));
  CHECK(rows[4].spec.model.q == doctest::Approx(0.5));
  CHECK(rows[0].moves.mean <= rows[4].moves.mean);  // noise only hurts
  CHECK_THROWS_AS(sweep("frobnicate", {"1"}, base, 1), Error);
}

TEST_CASE("csv rows are aligned with the header and quote commas") {
  ResultRow row = run(walk_spec(), 1);
  std::string header = csv_header();
  std::string line = csv_row(row);
  auto count_cols = [](const std::string& s) {
    std::size_t cols = 1;
    bool quoted = false;
    for (char c : s) {
      if (c == '"') quoted = !quoted;
      if (c == ',' && !quoted) ++cols;
    }
    return cols;
  };
  CHECK(count_cols(header) == count_cols(line));
  CHECK(line.find("\"completeb:2,5,5\"") != std::string::npos);

  nlohmann::json j = nlohmann::json::parse(jsonl_row(row));
  CHECK(j["tree"] == "completeb:2,5,5");
  CHECK(j["moves"]["mean"] == doctest::Approx(5.0));
  CHECK(!j.contains("wall_ms"));  // timing never lands in rendered rows
}

TEST_CASE("experiment files: sections, sweeps and failure modes") {
  const char* path = "/tmp/nts_experiments_test.cfg";
  {
    std::ofstream out(path);
    out << "# demo experiments\n"
        << "[walk_sweep]\n"
        << "tree = completeb:2,4,4\n"
        << "algo = a_walk\n"
        << "trials = 200\n"
        << "seed = 5\n"
        << "sweep_axis = q\n"
        << "sweep_values = 0,0.2\n"
        << "\n"
        << "[single_pf]\n"
        << "tree = path:6\n"
        << "algo = pf\n"
        << "lambda = 0.8\n"
        << "q = 0.1\n"
        << "trials = 300\n"
        << "metrics = moves\n";
  }
  auto runs = parse_experiment_file(path);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].sweep_over.has_value());
  CHECK(runs[1].base.params.lambda == doctest::Approx(0.8));
  auto rows = run_experiment_file(path, 0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].spec.name == "walk_sweep/q=0");
  CHECK(rows[0].moves.mean == doctest::Approx(4.0));
  CHECK(rows[2].spec.name == "single_pf");

  {
    std::ofstream out(path);
    out << "[bad]\nfrobnicate = 1\n";
  }
  CHECK_THROWS_AS(parse_experiment_file(path), Error);
  {
    std::ofstream out(path);
    out << "tree = path:3\n";  // key before any section
  }
  CHECK_THROWS_AS(parse_experiment_file(path), Error);
}

TEST_CASE("threshold reports: smoke runs at reduced size") {
  auto below = verify_below_threshold({4}, {3, 4, 5}, 0.8, 400, 2, 4.0, 0);
  REQUIRE(below.points.size() == 3);
  for (auto& p : below.points) CHECK(p.ratio > 0);
  CHECK(below.global_constant >= below.points[0].ratio);

  auto above = verify_above_threshold(10, 0.5, {2, 3}, 400, 2, 0);
  REQUIRE(above.points.size() == 2);
  CHECK(above.fitted_factor > 1.0);
}
