//===-- strategies.hpp - Branch inversion predicates ---------------------===//
//
// Three ways of building the query that inverts one path predicate
// constraint (the target):
//
//   sliced             - every earlier constraint that shares input bytes with
//                        the target, directly or transitively;
//   optimistic         - the negated target alone;
//   strong optimistic  - the subset of the sliced constraints the target is
//                        nested in (control dependent on) after following
//                        the call stack outwards, plus every constraint whose
//                        scope contains a control transfer instruction.
//
// plan_queries() encodes the order in which they are tried.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "sopt/concolic.hpp"

#include <optional>

namespace sopt {

enum class QueryKind : std::uint8_t { Sliced, Optimistic, StrongOptimistic };

inline constexpr std::size_t kNumQueryKinds = 3;

std::string_view to_string(QueryKind kind);

struct InversionQuery {
  QueryKind kind = QueryKind::Sliced;
  std::size_t target_seq = 0;
  /// Boolean expressions to satisfy; the last one is the negated target.
  std::vector<ExprRef> conjuncts;
  /// Original seqs of conjuncts[0 .. n-2], strictly increasing.
  std::vector<std::size_t> included;
};

/// Same conjunct lists, compared by expression-tree structure.
bool same_conjuncts(const InversionQuery &a, const InversionQuery &b);

/// `kind; target_seq; [seq,...,NEG]`
std::string dump_query(const InversionQuery &query);

InversionQuery slice(const PathPredicate &predicate, std::size_t target_seq);

InversionQuery build_optimistic(const PathPredicate &predicate, std::size_t target_seq);

/// One row of the reverse sweep, for golden comparisons against worked
/// traces.
struct SweepStep {
  enum class Action { SkippedNotPrefix, IncludedNested, IncludedCti, Excluded };

  std::size_t seq = 0;
  Address point = 0;          // point after any frame update
  CallStackSnapshot stack;    // cs after any frame update
  bool frame_update = false;
  Action action = Action::Excluded;
};

std::string_view to_string(SweepStep::Action action);

/// Walks the sliced constraints from nearest to farthest. The current point
/// starts at the target jump and cs at its call stack. A constraint from a
/// frame that already returned is skipped; one from an enclosing frame moves
/// point to the call site leaving that frame. The constraint is kept when
/// src <= point < dst or its scope holds a CTI.
InversionQuery build_strong_optimistic(const PathPredicate &predicate,
                                       const InversionQuery &sliced, std::size_t target_seq,
                                       std::vector<SweepStep> *sweep = nullptr);

enum class SolveStatus : std::uint8_t { Sat, Unsat, Timeout };

std::string_view to_string(SolveStatus status);

enum class StrategyMode : std::uint8_t { Default, OptOnly, SoptOnly, OptPlusSopt };

std::string_view to_string(StrategyMode mode);
std::optional<StrategyMode> strategy_mode_from_string(std::string_view text);

enum class PlanStep : std::uint8_t {
  SaveSliced,
  QueryOptimistic,
  QueryStrongOptimistic,
  SaveOptimistic,
  SaveStrongOptimistic,
};

std::string_view to_string(PlanStep step);

struct StrategyPlan {
  std::vector<PlanStep> steps;
  /// Query whose verdict is needed before the plan can continue.
  std::optional<QueryKind> pending;
  /// Built whenever the flowchart reaches the strong optimistic stage.
  std::optional<InversionQuery> strong;
  /// Strong optimistic query was structurally identical to the optimistic
  /// one, so it was not issued.
  bool strong_matches_optimistic = false;
};

/// Decision procedure for one target. Verdicts are supplied as they become
/// known; when a verdict that the flowchart needs is missing the plan stops
/// with `pending` set. TIMEOUT behaves like UNSAT.
StrategyPlan plan_queries(const PathPredicate &predicate, std::size_t target_seq,
                          SolveStatus sliced_verdict,
                          std::optional<SolveStatus> optimistic_verdict = std::nullopt,
                          std::optional<SolveStatus> strong_verdict = std::nullopt,
                          StrategyMode mode = StrategyMode::OptPlusSopt);

} // namespace sopt
