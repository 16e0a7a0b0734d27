// End-to-end checks of the installed command-line tool.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct CmdResult {
  int exit_code;
  std::string output;
};

CmdResult run_cmd(const std::string& args) {
  std::string cmd = std::string(NTS_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 512> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("gen writes the text format and simulate reads it back") {
  auto gen = run_cmd("gen --tree completeb:3,2,2 --out-file /tmp/nts_cli.tree");
  CHECK(gen.exit_code == 0);
  std::ifstream in("/tmp/nts_cli.tree");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "13 0 4");

  auto sim = run_cmd(
      "simulate --tree /tmp/nts_cli.tree --algo a_walk --q 0 --trials 1");
  CHECK(sim.exit_code == 0);
  CHECK(sim.output.find("a_walk") != std::string::npos);

  auto stdout_gen = run_cmd("gen --tree path:3");
  CHECK(stdout_gen.exit_code == 0);
  CHECK(stdout_gen.output.rfind("3 0 2", 0) == 0);
}

TEST_CASE("simulate: json output and the dump flag") {
  auto json = run_cmd(
      "simulate --tree completeb:2,4,4 --algo a_walk --q 0 --trials 2 "
      "--out json");
  CHECK(json.exit_code == 0);
  CHECK(json.output.find("\"moves\":{\"mean\":4.0") != std::string::npos);

  auto dump = run_cmd(
      "simulate --tree path:4 --algo pf --q 0 --lambda 1 --trials 1 --dump");
  CHECK(dump.exit_code == 0);
  CHECK(dump.output.find("move 1 1 0") != std::string::npos);

  auto bad_dump = run_cmd(
      "simulate --tree path:4 --algo a_walk --q 0 --trials 5 --dump");
  CHECK(bad_dump.exit_code != 0);
}

TEST_CASE("bad inputs exit nonzero with a usage hint") {
  auto bad_algo = run_cmd("simulate --tree path:3 --algo a_frob --trials 5");
  CHECK(bad_algo.exit_code != 0);
  CHECK(bad_algo.output.find("unknown algorithm") != std::string::npos);

  auto no_trials = run_cmd("simulate --tree path:3 --algo a_walk --trials 0");
  CHECK(no_trials.exit_code != 0);

  auto missing = run_cmd("simulate --algo a_walk");
  CHECK(missing.exit_code != 0);

  auto help = run_cmd("simulate --help");
  CHECK(help.exit_code == 0);
  for (const char* flag : {"--tree", "--algo", "--q", "--model", "--trials",
                           "--seed", "--epsilon", "--lambda", "--kappa1",
                           "--kappa2", "--out"})
    CHECK(help.output.find(flag) != std::string::npos);
}

TEST_CASE("oracle subcommand prints the exact rational") {
  auto r = run_cmd("oracle --tree star:3,1 --algo a_walk --metric queries "
                   "--q 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("7/3 = 2.33333", 0) == 0);

  auto capped = run_cmd("oracle --tree completeb:2,5 --algo a_walk "
                        "--metric queries --q 0.5");
  CHECK(capped.exit_code != 0);
  CHECK(capped.output.find("cap") != std::string::npos);
}

TEST_CASE("verify subcommand: single criterion and bad ids") {
  auto ok = run_cmd("verify --only AC5");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("AC5") != std::string::npos);
  CHECK(ok.output.find("PASS") != std::string::npos);

  auto bad = run_cmd("verify --only AC99");
  CHECK(bad.exit_code != 0);
}

TEST_CASE("experiment subcommand writes csv") {
  {
    std::ofstream out("/tmp/nts_cli_exp.cfg");
    out << "[cli_demo]\ntree = path:4\nalgo = a_walk\ntrials = 20\nq = 0\n";
  }
  auto r = run_cmd("experiment /tmp/nts_cli_exp.cfg --csv /tmp/nts_cli_exp.csv");
  CHECK(r.exit_code == 0);
  std::ifstream in("/tmp/nts_cli_exp.csv");
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK(row.find("cli_demo") != std::string::npos);
}
