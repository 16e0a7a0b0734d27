#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "nts.h"

TEST_CASE("status names and error reporting") {
  CHECK(std::string(nts_status_name(NTS_OK)) == "ok");
  nts_tree* tree = nullptr;
  nts_status st = nts_tree_create("frob:1", 0, &tree);
  CHECK(st == NTS_ERR_PARSE);
  CHECK(std::strlen(nts_last_error()) > 0);
  st = nts_tree_create("completeb:10,6", 0, &tree);
  CHECK(st == NTS_ERR_BUDGET);
}

TEST_CASE("tree handles: create, stats, save, load, render") {
  nts_tree* tree = nullptr;
  REQUIRE(nts_tree_create("completeb:3,2,2", 0, &tree) == NTS_OK);
  CHECK(nts_tree_node_count(tree) == 13);
  CHECK(nts_tree_depth(tree) == 2);
  CHECK(nts_tree_treasure_depth(tree) == 2);

  const char* path = "/tmp/nts_capi_tree.txt";
  REQUIRE(nts_tree_save(tree, path) == NTS_OK);
  nts_tree* back = nullptr;
  REQUIRE(nts_tree_load(path, &back) == NTS_OK);
  CHECK(nts_tree_node_count(back) == 13);
  CHECK(nts_tree_treasure(back) == nts_tree_treasure(tree));

  char a[4096], b[4096];
  REQUIRE(nts_tree_render(tree, a, sizeof a, nullptr) == NTS_OK);
  REQUIRE(nts_tree_render(back, b, sizeof b, nullptr) == NTS_OK);
  CHECK(std::string(a) == std::string(b));

  char tiny[4];
  CHECK(nts_tree_render(tree, tiny, sizeof tiny, nullptr) ==
        NTS_ERR_INVALID_ARGUMENT);
  nts_tree_free(tree);
  nts_tree_free(back);
}

TEST_CASE("simulate: noiseless exactness through the C surface") {
  nts_sim_params p;
  nts_sim_params_init(&p);
  p.trials = 100;
  p.seed = 7;
  nts_result* r = nullptr;
  REQUIRE(nts_simulate("completeb:2,5,5", "random", 0.0, nullptr, "a_walk",
                       &p, 0, &r) == NTS_OK);
  CHECK(nts_result_has_metric(r, "moves") == 1);
  CHECK(nts_result_mean(r, "moves") == doctest::Approx(5.0));
  CHECK(nts_result_stderr(r, "moves") == doctest::Approx(0.0));
  CHECK(nts_result_mean(r, "queries") == doctest::Approx(6.0));
  CHECK(nts_result_censored_fraction(r) == doctest::Approx(0.0));

  char buf[4096];
  size_t written = 0;
  REQUIRE(nts_result_render(r, "csv_header", buf, sizeof buf, &written) ==
          NTS_OK);
  CHECK(written > 0);
  REQUIRE(nts_result_render(r, "csv", buf, sizeof buf, nullptr) == NTS_OK);
  CHECK(std::string(buf).find("a_walk") != std::string::npos);
  REQUIRE(nts_result_render(r, "jsonl", buf, sizeof buf, nullptr) == NTS_OK);
  CHECK(std::string(buf).find("\"moves\"") != std::string::npos);
  CHECK(nts_result_render(r, "sonnet", buf, sizeof buf, nullptr) ==
        NTS_ERR_INVALID_ARGUMENT);
  nts_result_free(r);

  CHECK(nts_simulate("completeb:2,5,5", "random", 0.0, nullptr, "a_frob", &p,
                     0, &r) == NTS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("oracle: exact rationals and the cap") {
  char rational[128];
  double value = 0.0;
  REQUIRE(nts_oracle_expected_cost("path:3", "random", 0.5, "a_walk",
                                   "queries", 0.75, 0, rational,
                                   sizeof rational, &value) == NTS_OK);
  CHECK(std::string(rational) == "3");
  CHECK(value == doctest::Approx(3.0));

  REQUIRE(nts_oracle_expected_cost("star:3,1", "random", 0.5, "a_walk",
                                   "queries", 0.75, 0, rational,
                                   sizeof rational, &value) == NTS_OK);
  CHECK(std::string(rational) == "7/3");

  CHECK(nts_oracle_expected_cost("completeb:2,4", "random", 0.5, "a_walk",
                                 "queries", 0.75, 0, rational,
                                 sizeof rational, &value) == NTS_ERR_CAP);
}

TEST_CASE("trace: one line per step") {
  nts_sim_params p;
  nts_sim_params_init(&p);
  p.trials = 1;
  std::vector<std::string> lines;
  auto cb = [](const char* line, void* user) {
    static_cast<std::vector<std::string>*>(user)->push_back(line);
  };
  REQUIRE(nts_trace_trial("path:4", "random", 0.0, "a_walk", &p, 0, cb,
                          &lines) == NTS_OK);
  REQUIRE(lines.size() >= 4);
  CHECK(lines[0].rfind("query 0 ", 0) == 0);
  for (auto& l : lines)
    CHECK((l.rfind("query ", 0) == 0 || l.rfind("move ", 0) == 0));
}

TEST_CASE("experiment files through the C surface") {
  const char* cfg = "/tmp/nts_capi_exp.cfg";
  {
    std::ofstream out(cfg);
    out << "[demo]\ntree = path:5\nalgo = a_walk\ntrials = 50\nq = 0\n";
  }
  const char* csv = "/tmp/nts_capi_exp.csv";
  const char* jsonl = "/tmp/nts_capi_exp.jsonl";
  REQUIRE(nts_experiment_run_file(cfg, csv, jsonl, 2) == NTS_OK);
  std::ifstream in(csv);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK(header.rfind("name,tree,algo", 0) == 0);
  CHECK(row.find("demo") != std::string::npos);
  std::ifstream jin(jsonl);
  std::string jrow;
  REQUIRE(std::getline(jin, jrow));
  CHECK(jrow.find("\"algo\":\"a_walk\"") != std::string::npos);
}

TEST_CASE("verify: a single cheap criterion end to end") {
  struct Seen {
    int calls = 0;
    int passed = -1;
    std::string id;
  } seen;
  auto cb = [](const char* id, int passed, const char*, void* user) {
    auto* s = static_cast<Seen*>(user);
    ++s->calls;
    s->passed = passed;
    s->id = id;
  };
  int all = 0;
  REQUIRE(nts_verify("AC5", 2, cb, &seen, &all) == NTS_OK);
  CHECK(seen.calls == 1);
  CHECK(seen.id == "AC5");
  CHECK(seen.passed == 1);
  CHECK(all == 1);
  CHECK(nts_verify("AC99", 2, cb, &seen, &all) == NTS_ERR_INVALID_ARGUMENT);
}
