// Command-line front door. Links only the extern-C API.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nts.h"

namespace {

int report_error(const char* what, nts_status st) {
  std::fprintf(stderr, "nts: %s: %s (%s)\n", what, nts_last_error(),
               nts_status_name(st));
  return 1;
}

struct SimulateArgs {
  std::string tree, algo, model = "random", q_file, out = "csv";
  double q = 0.0, epsilon = 0.2, lambda = 0.75, kappa1 = 0.0, kappa2 = 0.0;
  std::uint64_t trials = 1000, seed = 1, step_cap = 1000000000ull,
                budget = 0;
  int threads = 0;
  bool dump = false;
};

nts_sim_params to_params(const SimulateArgs& a) {
  nts_sim_params p;
  nts_sim_params_init(&p);
  p.trials = a.trials;
  p.seed = a.seed;
  p.epsilon = a.epsilon;
  p.lambda = a.lambda;
  p.kappa1 = a.kappa1;
  p.kappa2 = a.kappa2;
  p.step_cap = a.step_cap;
  p.threads = a.threads;
  return p;
}

void add_sim_flags(CLI::App* cmd, SimulateArgs& a, bool need_algo) {
  cmd->add_option("--tree", a.tree,
                  "tree: generator (complete:9,6,6, completeb:2,5, "
                  "completen:8,512, caterpillar:10,5, trimmed:4,6, path:13, "
                  "star:8) or a tree file path")
      ->required();
  auto* algo = cmd->add_option(
      "--algo", a.algo,
      "a_walk | a_natural | a_walk_uniform_theta | a_sep | a_loop | "
      "a_two_layers | pf");
  if (need_algo) algo->required();
  cmd->add_option("--q", a.q, "fault probability per node")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--q-file", a.q_file, "per-node q overrides (node q lines)");
  cmd->add_option("--model", a.model,
                  "random | semiadv:root | semiadv:child | semiadv:file=PATH");
  cmd->add_option("--trials", a.trials, "Monte-Carlo trials");
  cmd->add_option("--seed", a.seed, "root seed");
  cmd->add_option("--epsilon", a.epsilon, "separator radius parameter");
  cmd->add_option("--lambda", a.lambda, "listening probability for pf");
  cmd->add_option("--kappa1", a.kappa1, "a_two_layers inner radius factor");
  cmd->add_option("--kappa2", a.kappa2, "a_two_layers outer radius factor");
  cmd->add_option("--step-cap", a.step_cap, "censoring cap for pf");
  cmd->add_option("--budget", a.budget, "node budget for materialized trees");
  cmd->add_option("--threads", a.threads,
                  "worker threads (0: NTS_THREADS or hardware)");
}

int run_simulate(const SimulateArgs& a) {
  if (a.trials < 1) {
    std::fprintf(stderr, "nts: --trials must be at least 1\n");
    return 1;
  }
  nts_sim_params p = to_params(a);
  if (a.dump) {
    if (a.trials != 1) {
      std::fprintf(stderr, "nts: --dump requires --trials 1\n");
      return 1;
    }
    nts_status st = nts_trace_trial(
        a.tree.c_str(), a.model.c_str(), a.q, a.algo.c_str(), &p, 0,
        [](const char* line, void*) { std::printf("%s\n", line); }, nullptr);
    if (st != NTS_OK) return report_error("trace", st);
  }
  nts_result* result = nullptr;
  nts_status st = nts_simulate(a.tree.c_str(), a.model.c_str(), a.q,
                               a.q_file.empty() ? nullptr : a.q_file.c_str(),
                               a.algo.c_str(), &p, a.budget, &result);
  if (st != NTS_OK) return report_error("simulate", st);
  char buf[4096];
  if (a.out == "json") {
    nts_result_render(result, "jsonl", buf, sizeof buf, nullptr);
    std::printf("%s\n", buf);
  } else {
    nts_result_render(result, "csv_header", buf, sizeof buf, nullptr);
    std::printf("%s\n", buf);
    nts_result_render(result, "csv", buf, sizeof buf, nullptr);
    std::printf("%s\n", buf);
  }
  nts_result_free(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search on trees with permanently noisy advice"};
  app.require_subcommand(1);

  // gen
  std::string gen_tree, gen_out;
  std::uint64_t gen_budget = 0;
  auto* gen = app.add_subcommand("gen", "generate a tree and save/print it");
  gen->add_option("--tree", gen_tree, "generator description")->required();
  gen->add_option("--out-file", gen_out, "output path (default: stdout)");
  gen->add_option("--budget", gen_budget, "node budget");

  // simulate
  SimulateArgs sim;
  auto* simulate =
      app.add_subcommand("simulate", "run Monte-Carlo trials of an algorithm");
  add_sim_flags(simulate, sim, true);
  simulate->add_option("--out", sim.out, "csv | json");
  simulate->add_flag("--dump", sim.dump,
                     "print one trial step by step (needs --trials 1)");

  // oracle
  SimulateArgs ora;
  std::string ora_metric = "queries";
  std::uint32_t ora_cap = 0;
  auto* oracle = app.add_subcommand(
      "oracle", "exact expected cost by advice enumeration (small trees)");
  oracle->add_option("--tree", ora.tree, "generator or tree file")->required();
  oracle->add_option("--algo", ora.algo, "algorithm id")->required();
  oracle->add_option("--metric", ora_metric, "moves | queries");
  oracle->add_option("--q", ora.q, "fault probability")
      ->check(CLI::Range(0.0, 1.0));
  oracle->add_option("--model", ora.model, "random | semiadv:root|child");
  oracle->add_option("--lambda", ora.lambda, "listening probability for pf");
  oracle->add_option("--cap", ora_cap, "enumeration cap (default 12)");

  // verify
  std::string only = "all";
  int verify_threads = 0;
  auto* verify = app.add_subcommand(
      "verify", "run the verification suite (pass/fail per criterion)");
  verify->add_option("--only", only, "one criterion id (default: all)");
  verify->add_option("--threads", verify_threads, "worker threads");

  // experiment
  std::string cfg, cfg_csv, cfg_jsonl;
  int cfg_threads = 0;
  auto* experiment = app.add_subcommand(
      "experiment", "run a declarative experiment file (sections of "
                    "key=value lines, optional sweeps)");
  experiment->add_option("config", cfg, "experiment file")->required();
  experiment->add_option("--csv", cfg_csv, "write rows as CSV");
  experiment->add_option("--jsonl", cfg_jsonl, "write rows as JSON lines");
  experiment->add_option("--threads", cfg_threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    nts_tree* tree = nullptr;
    nts_status st = nts_tree_create(gen_tree.c_str(), gen_budget, &tree);
    if (st != NTS_OK) return report_error("gen", st);
    if (gen_out.empty()) {
      size_t need = 32 * (nts_tree_node_count(tree) + 2);
      std::vector<char> buf(need);
      st = nts_tree_render(tree, buf.data(), buf.size(), nullptr);
      if (st != NTS_OK) {
        nts_tree_free(tree);
        return report_error("gen", st);
      }
      std::fputs(buf.data(), stdout);
    } else {
      st = nts_tree_save(tree, gen_out.c_str());
      if (st != NTS_OK) {
        nts_tree_free(tree);
        return report_error("gen", st);
      }
    }
    nts_tree_free(tree);
    return 0;
  }

  if (simulate->parsed()) return run_simulate(sim);

  if (oracle->parsed()) {
    char rational[512];
    double value = 0.0;
    nts_status st = nts_oracle_expected_cost(
        ora.tree.c_str(), ora.model.c_str(), ora.q, ora.algo.c_str(),
        ora_metric.c_str(), ora.lambda, ora_cap, rational, sizeof rational,
        &value);
    if (st != NTS_OK) return report_error("oracle", st);
    std::printf("%s = %.12g\n", rational, value);
    return 0;
  }

  if (verify->parsed()) {
    int all_passed = 0;
    nts_status st = nts_verify(
        only.c_str(), verify_threads,
        [](const char* id, int passed, const char* detail, void*) {
          std::printf("%-5s %s  %s\n", id, passed ? "PASS" : "FAIL", detail);
          std::fflush(stdout);
        },
        nullptr, &all_passed);
    if (st != NTS_OK) return report_error("verify", st);
    return all_passed ? 0 : 1;
  }

  if (experiment->parsed()) {
    nts_status st = nts_experiment_run_file(
        cfg.c_str(), cfg_csv.empty() ? nullptr : cfg_csv.c_str(),
        cfg_jsonl.empty() ? nullptr : cfg_jsonl.c_str(), cfg_threads);
    if (st != NTS_OK) return report_error("experiment", st);
    if (cfg_csv.empty() && cfg_jsonl.empty())
      std::fprintf(stderr, "nts: experiment ran; pass --csv/--jsonl to keep "
                           "the rows\n");
    return 0;
  }
  return 0;
}
