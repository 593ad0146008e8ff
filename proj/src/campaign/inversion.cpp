#include "sopt/campaign.hpp"

#include <algorithm>

namespace sopt {

std::string_view to_string(Correctness c) {
  switch (c) {
  case Correctness::Correct: return "correct";
  case Correctness::Incorrect: return "incorrect";
  case Correctness::NotReached: return "not_reached";
  }
  return "?";
}

Correctness validate(const Program &program, const BranchConstraint &target,
                     std::span<const std::uint8_t> candidate, ValidationMode mode,
                     std::uint64_t step_limit) {
  const ExecTrace trace = run_concrete(program, candidate, step_limit);
  bool reached = false;
  for (const BranchEvent &ev : trace.branch_events) {
    if (ev.src != target.src)
      continue;
    if (mode == ValidationMode::Strict) {
      if (ev.occurrence != target.occurrence)
        continue;
      return ev.taken != target.taken ? Correctness::Correct : Correctness::Incorrect;
    }
    reached = true;
    if (ev.taken != target.taken)
      return Correctness::Correct;
  }
  return reached ? Correctness::Incorrect : Correctness::NotReached;
}

namespace {

bool model_satisfies(const InversionQuery &query, const Model &model,
                     std::span<const std::uint8_t> seed) {
  const Bytes input = merge_model(model, seed);
  return std::all_of(query.conjuncts.begin(), query.conjuncts.end(),
                     [&](const ExprRef &c) { return evaluate(*c, input) != 0; });
}

} // namespace

InversionOutcome invert_target(const PathPredicate &predicate, std::size_t target_seq,
                               const StrategyConfig &config, Kernel kernel) {
  const BranchConstraint &target = predicate[target_seq];
  InversionOutcome outcome;
  outcome.seq = target_seq;
  outcome.src = target.src;
  outcome.occurrence = target.occurrence;
  std::array<std::optional<Model>, kNumQueryKinds> models;

  auto run = [&](InversionQuery query) {
    const auto kind = static_cast<std::size_t>(query.kind);
    Verdict verdict;
    try {
      verdict = solve(query, predicate.seed, config.solver, kernel);
    } catch (const QueryTooWide &e) {
      if (!config.external) {
        outcome.error += std::string(to_string(query.kind)) + ": " + e.what() + "; ";
        verdict.status = SolveStatus::Timeout;
      } else {
        verdict = config.external->solve(query);
        if (verdict.status == SolveStatus::Sat &&
            !model_satisfies(query, *verdict.model, predicate.seed)) {
          outcome.error += std::string(to_string(query.kind)) + ": external model rejected; ";
          verdict.status = SolveStatus::Timeout;
          verdict.model.reset();
        }
      }
    }
    outcome.verdicts[kind] = verdict.status;
    models[kind] = std::move(verdict.model);
    outcome.issued.push_back(std::move(query));
    return verdict.status;
  };

  const SolveStatus sliced = run(slice(predicate, target_seq));
  std::optional<SolveStatus> optimistic;
  std::optional<SolveStatus> strong;
  StrategyPlan plan;
  for (;;) {
    plan = plan_queries(predicate, target_seq, sliced, optimistic, strong, config.mode);
    if (!plan.pending)
      break;
    if (*plan.pending == QueryKind::Optimistic)
      optimistic = run(build_optimistic(predicate, target_seq));
    else
      strong = run(*plan.strong);
  }
  outcome.strong_matched_optimistic = plan.strong_matches_optimistic;

  auto save = [&](QueryKind kind) {
    const auto &model = models[static_cast<std::size_t>(kind)];
    outcome.inputs.push_back({kind, merge_model(*model, predicate.seed), Correctness::NotReached});
  };
  for (PlanStep step : plan.steps) {
    if (step == PlanStep::SaveSliced)
      save(QueryKind::Sliced);
    else if (step == PlanStep::SaveOptimistic)
      save(QueryKind::Optimistic);
    else if (step == PlanStep::SaveStrongOptimistic)
      save(QueryKind::StrongOptimistic);
  }
  return outcome;
}

void validate_outcome(const Program &program, const PathPredicate &predicate,
                      InversionOutcome &outcome, const StrategyConfig &config) {
  const BranchConstraint &target = predicate[outcome.seq];
  for (GeneratedInput &input : outcome.inputs)
    input.correctness =
        validate(program, target, input.bytes, config.validation, config.step_limit);
  outcome.counted_sat =
      std::any_of(outcome.verdicts.begin(), outcome.verdicts.end(),
                  [](const auto &v) { return v == SolveStatus::Sat; })
          ? 1
          : 0;
  outcome.counted_correct =
      std::any_of(outcome.inputs.begin(), outcome.inputs.end(),
                  [](const GeneratedInput &g) { return g.correctness == Correctness::Correct; })
          ? 1
          : 0;
}

} // namespace sopt
