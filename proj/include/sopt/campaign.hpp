//===-- campaign.hpp - Branch inversion campaigns and metrics ------------===//
//
// A campaign runs the concolic engine once on a seed, then tries to invert
// every recorded constraint in path order under one strategy mode. Each
// generated input is replayed concretely to check that it reaches the target
// jump and takes the other direction.
//
// Counting follows max-one semantics per target: a target with several SAT
// queries counts once towards `sat_branches`, and once towards
// `correct_branches` if any of its inputs is correct.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "sopt/solver.hpp"

#include <array>
#include <filesystem>

namespace sopt {

enum class ValidationMode : std::uint8_t { Strict, Loose };

enum class ClockKind : std::uint8_t {
  Steady,
  /// Every issued solver query advances time by one millisecond, which
  /// makes reported speed reproducible.
  Logical,
};

struct StrategyConfig {
  StrategyMode mode = StrategyMode::OptPlusSopt;
  SolverBudget solver;
  std::optional<std::size_t> max_branches;
  std::optional<std::chrono::milliseconds> wall_budget;
  ValidationMode validation = ValidationMode::Strict;
  ClockKind clock = ClockKind::Steady;
  unsigned jobs = 1;
  std::uint64_t step_limit = kDefaultStepLimit;
  /// Used for queries wider than solver.max_bytes.
  std::optional<ExternalSolver> external;
};

enum class Correctness : std::uint8_t { Correct, Incorrect, NotReached };

std::string_view to_string(Correctness c);

/// Replays `candidate` and looks for the target jump. Strict mode requires
/// the same dynamic occurrence; loose mode accepts any execution of the site.
Correctness validate(const Program &program, const BranchConstraint &target,
                     std::span<const std::uint8_t> candidate,
                     ValidationMode mode = ValidationMode::Strict,
                     std::uint64_t step_limit = kDefaultStepLimit);

struct GeneratedInput {
  QueryKind kind = QueryKind::Sliced;
  Bytes bytes;
  Correctness correctness = Correctness::NotReached;
};

struct InversionOutcome {
  std::size_t seq = 0;
  Address src = 0;
  std::uint32_t occurrence = 0;
  std::array<std::optional<SolveStatus>, kNumQueryKinds> verdicts{};
  /// Queries handed to a solver, in issue order.
  std::vector<InversionQuery> issued;
  std::vector<GeneratedInput> inputs;
  bool strong_matched_optimistic = false;
  std::string error;
  int counted_sat = 0;
  int counted_correct = 0;

  std::optional<SolveStatus> verdict(QueryKind k) const {
    return verdicts[static_cast<std::size_t>(k)];
  }
};

/// Solves the queries for one target following plan_queries(). Inputs are
/// left unvalidated.
InversionOutcome invert_target(const PathPredicate &predicate, std::size_t target_seq,
                               const StrategyConfig &config, Kernel kernel = Kernel::Parallel);

/// Validates the outcome's inputs in place and sets counted_sat and
/// counted_correct.
void validate_outcome(const Program &program, const PathPredicate &predicate,
                      InversionOutcome &outcome, const StrategyConfig &config);

struct KindStats {
  std::size_t queries = 0;
  std::size_t sat = 0;
  std::size_t inputs = 0;
  std::size_t correct_inputs = 0;
};

struct Metrics {
  std::size_t targets = 0;
  std::size_t sat_branches = 0;
  std::size_t correct_branches = 0;
  std::size_t correct_sites = 0;  // distinct src addresses among correct targets
  double accuracy = 0.0;
  double speed = 0.0;  // correct branches per minute
  std::array<KindStats, kNumQueryKinds> per_kind{};
};

Metrics compute_metrics(std::span<const InversionOutcome> outcomes,
                        std::chrono::nanoseconds elapsed);

struct CampaignReport {
  StrategyMode mode = StrategyMode::OptPlusSopt;
  std::size_t constraints = 0;
  Metrics metrics;
  std::chrono::nanoseconds elapsed{0};
  std::size_t coverage_base = 0;
  std::size_t coverage_with_generated = 0;
};

struct CorpusEntry {
  Address src = 0;
  std::uint32_t occurrence = 0;
  QueryKind kind = QueryKind::Sliced;
  Bytes bytes;

  /// `<src>_<occurrence>_<kind>.bin`
  std::string file_name() const;
};

struct CampaignResult {
  CampaignReport report;
  PathPredicate predicate;
  std::vector<InversionOutcome> outcomes;
  std::vector<CorpusEntry> corpus;
};

CampaignResult invert_all(const Program &program, std::span<const std::uint8_t> seed,
                          const StrategyConfig &config);

/// key=value lines.
std::string format_report(const CampaignReport &report);

std::string csv_header();
std::string csv_row(const CampaignReport &report);

void write_corpus(const std::filesystem::path &dir, std::span<const CorpusEntry> corpus);

struct CoverageRow {
  std::string label;
  StrategyMode mode = StrategyMode::Default;
  std::size_t coverage = 0;
  std::optional<double> growth;  // relative to the previous row, in percent
  CampaignReport report;
};

/// Coverage of {seed} plus each configuration's generated corpus. Rows are
/// labelled Base/Opt/Sopt for the default, opt and opt+sopt modes.
std::vector<CoverageRow> compare_configs(const Program &program,
                                         std::span<const std::uint8_t> seed,
                                         std::span<const StrategyConfig> configs);

std::string format_coverage_table(std::span<const CoverageRow> rows);

} // namespace sopt
