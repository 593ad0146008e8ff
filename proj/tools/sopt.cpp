// sopt - command-line front end for the concolic laboratory.
//
// Exit status: 0 success, 1 analysis fault, 2 usage error.

#include "sopt/campaign.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sopt;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string program;
  std::string seed;
  std::string mode = "opt+sopt";
  double solver_timeout = 10.0;
  std::size_t max_bytes = 3;
  std::size_t budget_branches = 0;
  double budget_seconds = 0.0;
  std::string validate = "strict";
  std::string out;
  bool smt_dump = false;
  std::string external_solver;
  std::string clock = "steady";
  unsigned jobs = 1;
  std::uint64_t step_limit = kDefaultStepLimit;
  std::size_t target = 0;
  std::string corpus;
};

std::string read_text(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Bytes read_bytes(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Program load_program(const Options &o) {
  try {
    return assemble(read_text(o.program));
  } catch (const AsmError &e) {
    throw UsageError(o.program + ":" + e.what());
  }
}

Bytes load_seed(const Options &o, const Program &p) {
  Bytes seed = read_bytes(o.seed);
  if (seed.size() != p.input_length)
    throw UsageError("seed " + o.seed + " has " + std::to_string(seed.size()) +
                     " bytes, program expects " + std::to_string(p.input_length));
  return seed;
}

StrategyConfig make_config(const Options &o) {
  StrategyConfig c;
  auto mode = strategy_mode_from_string(o.mode);
  if (!mode)
    throw UsageError("unknown mode " + o.mode);
  c.mode = *mode;
  c.solver.time_limit =
      std::chrono::milliseconds(static_cast<std::int64_t>(o.solver_timeout * 1000.0));
  c.solver.max_bytes = o.max_bytes;
  if (o.budget_branches)
    c.max_branches = o.budget_branches;
  if (o.budget_seconds > 0)
    c.wall_budget =
        std::chrono::milliseconds(static_cast<std::int64_t>(o.budget_seconds * 1000.0));
  c.validation = o.validate == "loose" ? ValidationMode::Loose : ValidationMode::Strict;
  c.clock = o.clock == "logical" ? ClockKind::Logical : ClockKind::Steady;
  c.jobs = std::max(1u, o.jobs);
  c.step_limit = o.step_limit;
  std::string external = o.external_solver;
  if (external.empty())
    if (const char *env = std::getenv("SOPT_EXTERNAL_SOLVER"))
      external = env;
  if (!external.empty())
    c.external = ExternalSolver(external);
  return c;
}

std::string hex(std::span<const std::uint8_t> bytes) {
  std::string out;
  char buf[4];
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::snprintf(buf, sizeof buf, i ? " %02x" : "%02x", bytes[i]);
    out += buf;
  }
  return out;
}

void dump_smt(const Options &o, const BranchConstraint &target,
              std::span<const InversionQuery> issued) {
  if (!o.smt_dump)
    return;
  const fs::path dir = o.out.empty() ? fs::path("sopt-out") : fs::path(o.out);
  fs::create_directories(dir);
  for (const InversionQuery &q : issued) {
    const fs::path file = dir / (std::to_string(target.src) + "_" +
                                 std::to_string(target.occurrence) + "_" +
                                 std::string(to_string(q.kind)) + ".smt2");
    std::ofstream(file) << export_smt(q);
  }
}

int cmd_asm(const Options &o) {
  const Program p = load_program(o);
  std::cout << disassemble(p);
  return 0;
}

int cmd_run(const Options &o) {
  const Program p = load_program(o);
  const Bytes seed = load_seed(o, p);
  const ExecTrace t = run_concrete(p, seed, o.step_limit);
  std::cout << "terminated=" << to_string(t.terminated) << '\n';
  std::cout << "steps=" << t.steps << '\n';
  if (!t.fault.empty())
    std::cout << "fault=" << t.fault << '\n';
  for (const Edge &e : t.edges)
    std::cout << "edge " << e.from << " -> " << e.to << '\n';
  for (const BranchEvent &b : t.branch_events)
    std::cout << "branch " << b.src << " #" << b.occurrence << (b.taken ? " taken" : " not-taken")
              << '\n';
  return t.terminated == Termination::Fault ? 1 : 0;
}

int cmd_trace(const Options &o) {
  const Program p = load_program(o);
  const Bytes seed = load_seed(o, p);
  const PathPredicate pred = run_concolic(p, seed, o.step_limit);
  std::cout << dump_trace(pred);
  return pred.terminated == Termination::Fault ? 1 : 0;
}

int cmd_invert(const Options &o) {
  const Program p = load_program(o);
  const Bytes seed = load_seed(o, p);
  const StrategyConfig config = make_config(o);
  const PathPredicate pred = run_concolic(p, seed, o.step_limit);
  if (o.target >= pred.size())
    throw UsageError("target " + std::to_string(o.target) + " out of range (" +
                     std::to_string(pred.size()) + " constraints)");

  const BranchConstraint &t = pred[o.target];
  InversionOutcome outcome = invert_target(pred, o.target, config);
  validate_outcome(p, pred, outcome, config);

  std::cout << "target seq=" << t.seq << " src=" << t.src << " dst=" << t.dst
            << " occurrence=" << t.occurrence << " taken=" << t.taken
            << " stack=" << format_stack(t.stack) << '\n';
  for (const InversionQuery &q : outcome.issued)
    std::cout << "query " << dump_query(q) << " -> "
              << to_string(*outcome.verdict(q.kind)) << '\n';
  if (outcome.strong_matched_optimistic)
    std::cout << "strong_optimistic matches optimistic, not issued\n";

  const InversionQuery sliced = slice(pred, o.target);
  std::vector<SweepStep> sweep;
  build_strong_optimistic(pred, sliced, o.target, &sweep);
  for (std::size_t i = 0; i < sweep.size(); ++i)
    std::cout << "sweep " << i + 1 << " seq=" << sweep[i].seq << " point=" << sweep[i].point
              << " cs=" << format_stack(sweep[i].stack) << ' ' << to_string(sweep[i].action)
              << '\n';
  for (const GeneratedInput &g : outcome.inputs)
    std::cout << "input " << to_string(g.kind) << " [" << hex(g.bytes) << "] "
              << to_string(g.correctness) << '\n';
  if (!outcome.error.empty())
    std::cerr << "error: " << outcome.error << '\n';

  dump_smt(o, t, outcome.issued);
  return 0;
}

int cmd_campaign(const Options &o) {
  const Program p = load_program(o);
  const Bytes seed = load_seed(o, p);
  const StrategyConfig config = make_config(o);
  const CampaignResult r = invert_all(p, seed, config);
  std::cout << format_report(r.report);
  std::cout << csv_header() << '\n' << csv_row(r.report) << '\n';
  for (const InversionOutcome &out : r.outcomes)
    if (!out.error.empty())
      std::cerr << "target " << out.seq << ": " << out.error << '\n';
  if (!o.out.empty())
    write_corpus(o.out, r.corpus);
  for (const InversionOutcome &out : r.outcomes)
    dump_smt(o, r.predicate[out.seq], out.issued);
  return 0;
}

int cmd_compare(const Options &o) {
  const Program p = load_program(o);
  const Bytes seed = load_seed(o, p);
  std::vector<StrategyConfig> configs;
  for (StrategyMode m : {StrategyMode::Default, StrategyMode::OptOnly, StrategyMode::OptPlusSopt}) {
    StrategyConfig c = make_config(o);
    c.mode = m;
    configs.push_back(std::move(c));
  }
  const auto rows = compare_configs(p, seed, configs);
  std::cout << format_coverage_table(rows);
  return 0;
}

int cmd_coverage(const Options &o) {
  const Program p = load_program(o);
  std::vector<Bytes> corpus;
  if (!o.seed.empty())
    corpus.push_back(load_seed(o, p));
  if (!o.corpus.empty()) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(o.corpus))
      if (entry.is_regular_file() && entry.path().extension() == ".bin")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path &f : files) {
      Bytes b = read_bytes(f);
      if (b.size() != p.input_length)
        throw UsageError(f.string() + ": wrong input length");
      corpus.push_back(std::move(b));
    }
  }
  std::cout << "inputs=" << corpus.size() << '\n';
  std::cout << "edges=" << edge_coverage(p, corpus, o.step_limit) << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Concolic branch inversion laboratory"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_program = [&](CLI::App *sub) {
    sub->add_option("--program", o.program, "Assembly source")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--step-limit", o.step_limit, "Instruction budget per run");
  };
  auto add_seed = [&](CLI::App *sub, bool required) {
    auto *opt = sub->add_option("--seed", o.seed, "Raw seed input")->check(CLI::ExistingFile);
    if (required)
      opt->required();
  };
  auto add_strategy = [&](CLI::App *sub) {
    sub->add_option("--mode", o.mode, "default, opt, sopt or opt+sopt")
        ->check(CLI::IsMember({"default", "opt", "sopt", "opt+sopt"}));
    sub->add_option("--solver-timeout", o.solver_timeout, "Seconds per query");
    sub->add_option("--max-bytes", o.max_bytes, "Widest query solved by enumeration");
    sub->add_option("--budget-branches", o.budget_branches, "Invert at most N constraints");
    sub->add_option("--budget-seconds", o.budget_seconds, "Wall-clock budget");
    sub->add_option("--validate", o.validate, "strict or loose")
        ->check(CLI::IsMember({"strict", "loose"}));
    sub->add_option("--out", o.out, "Output directory");
    sub->add_flag("--smt-dump", o.smt_dump, "Write an SMT-LIB script per query");
    sub->add_option("--external-solver", o.external_solver,
                    "Solver command for queries too wide to enumerate "
                    "(default: $SOPT_EXTERNAL_SOLVER)");
    sub->add_option("--clock", o.clock, "steady or logical")
        ->check(CLI::IsMember({"steady", "logical"}));
    sub->add_option("--jobs", o.jobs, "Targets solved concurrently");
  };

  auto *asm_cmd = app.add_subcommand("asm", "Assemble and print the program");
  add_program(asm_cmd);
  auto *run_cmd = app.add_subcommand("run", "Concrete run with edge trace");
  add_program(run_cmd);
  add_seed(run_cmd, true);
  auto *trace_cmd = app.add_subcommand("trace", "Concolic run, dump path predicate");
  add_program(trace_cmd);
  add_seed(trace_cmd, true);
  auto *invert_cmd = app.add_subcommand("invert", "Invert one constraint");
  add_program(invert_cmd);
  add_seed(invert_cmd, true);
  add_strategy(invert_cmd);
  invert_cmd->add_option("--target", o.target, "Constraint seq")->required();
  auto *campaign_cmd = app.add_subcommand("campaign", "Invert every constraint");
  add_program(campaign_cmd);
  add_seed(campaign_cmd, true);
  add_strategy(campaign_cmd);
  auto *compare_cmd = app.add_subcommand("compare", "Coverage of Base/Opt/Sopt corpora");
  add_program(compare_cmd);
  add_seed(compare_cmd, true);
  add_strategy(compare_cmd);
  auto *coverage_cmd = app.add_subcommand("coverage", "Edge coverage of a corpus");
  add_program(coverage_cmd);
  add_seed(coverage_cmd, false);
  coverage_cmd->add_option("--corpus", o.corpus, "Directory of .bin inputs")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*asm_cmd)
      return cmd_asm(o);
    if (*run_cmd)
      return cmd_run(o);
    if (*trace_cmd)
      return cmd_trace(o);
    if (*invert_cmd)
      return cmd_invert(o);
    if (*campaign_cmd)
      return cmd_campaign(o);
    if (*compare_cmd)
      return cmd_compare(o);
    if (*coverage_cmd)
      return cmd_coverage(o);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "fault: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
