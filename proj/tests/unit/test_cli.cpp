#include "support.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace sopt::testing;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; `redirect` picks which streams are kept.
Result cli(const std::string &args, const std::string &redirect = "2>/dev/null") {
  const std::string cmd = std::string(SOPT_CLI_PATH) + " " + args + " " + redirect;
  Result r;
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
    r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string program_args(const std::string &name) {
  return "--program " + corpus_path(name + ".asm") + " --seed " + corpus_path(name + ".seed");
}

} // namespace

TEST_CASE("asm reports syntax errors with a line number and exit code 2") {
  const auto path = std::filesystem::temp_directory_path() / "sopt-cli-bad.asm";
  std::ofstream(path) << ".input 1\n  halt\n  frob r1\n";
  const Result r = cli("asm --program " + path.string(), "2>&1 >/dev/null");
  CHECK(r.code == 2);
  CHECK(r.out.find("line 3") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("campaign --program /nonexistent.asm --seed /nonexistent.seed").code == 2);
  CHECK(cli("campaign " + program_args("listing1") + " --mode turbo").code == 2);
  CHECK(cli("invert " + program_args("listing1") + " --target 9").code == 2);
  const auto seed = std::filesystem::temp_directory_path() / "sopt-cli-short.seed";
  std::ofstream(seed) << "ab";
  CHECK(cli("trace --program " + corpus_path("listing1.asm") + " --seed " + seed.string()).code ==
        2);
  std::filesystem::remove(seed);
}

TEST_CASE("asm output reassembles to the same program") {
  const Result r = cli("asm --program " + corpus_path("nested_calls.asm"));
  CHECK(r.code == 0);
  CHECK(sopt::assemble(r.out) == load_corpus_program("nested_calls"));
}

TEST_CASE("trace prints the path predicate") {
  const Result r = cli("trace " + program_args("listing1"));
  CHECK(r.code == 0);
  CHECK(r.out.find("3; 21; 24; 1; 1; stack=[-,13]; expr=(lor (ne in3 0x36) (ne in0 0x35))") !=
        std::string::npos);
}

TEST_CASE("invert shows the three queries for the helper branch") {
  const Result r = cli("invert " + program_args("listing1") + " --target 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("query sliced; 3; [1,2,NEG] -> UNSAT") != std::string::npos);
  CHECK(r.out.find("query optimistic; 3; [NEG] -> SAT") != std::string::npos);
  CHECK(r.out.find("query strong_optimistic; 3; [2,NEG] -> SAT") != std::string::npos);
  CHECK(r.out.find("input strong_optimistic [35 37 20 36] correct") != std::string::npos);
}

TEST_CASE("campaign matches the golden report and is idempotent") {
  const std::string args =
      "campaign " + program_args("listing1") + " --mode opt+sopt --clock logical --jobs 1";
  const Result first = cli(args);
  CHECK(first.code == 0);
  CHECK(first.out == read_file(fixture_path("listing1_campaign.txt")));
  const Result second = cli(args);
  CHECK(second.out == first.out);
}

TEST_CASE("campaign writes the corpus and coverage reads it back") {
  const auto dir = std::filesystem::temp_directory_path() / "sopt-cli-corpus";
  std::filesystem::remove_all(dir);
  const Result r = cli("campaign " + program_args("listing1") + " --clock logical --out " +
                       dir.string() + " --smt-dump");
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "21_0_strong_optimistic.bin"));
  CHECK(std::filesystem::exists(dir / "21_0_optimistic.smt2"));
  const Result cov = cli("coverage " + program_args("listing1") + " --corpus " + dir.string());
  CHECK(cov.code == 0);
  CHECK(cov.out.find("edges=11") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("compare prints three rows") {
  const Result r = cli("compare " + program_args("listing1"));
  CHECK(r.code == 0);
  CHECK(r.out == "config,mode,coverage,growth\n"
                 "Base,default,9,\n"
                 "Opt,opt,9,+0.00%\n"
                 "Sopt,opt+sopt,11,+22.22%\n");
}
