#include "sopt/strategies.hpp"

namespace sopt {

std::string_view to_string(SolveStatus status) {
  switch (status) {
  case SolveStatus::Sat: return "SAT";
  case SolveStatus::Unsat: return "UNSAT";
  case SolveStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

std::string_view to_string(StrategyMode mode) {
  switch (mode) {
  case StrategyMode::Default: return "default";
  case StrategyMode::OptOnly: return "opt";
  case StrategyMode::SoptOnly: return "sopt";
  case StrategyMode::OptPlusSopt: return "opt+sopt";
  }
  return "?";
}

std::optional<StrategyMode> strategy_mode_from_string(std::string_view text) {
  for (StrategyMode m : {StrategyMode::Default, StrategyMode::OptOnly, StrategyMode::SoptOnly,
                         StrategyMode::OptPlusSopt})
    if (to_string(m) == text)
      return m;
  return std::nullopt;
}

std::string_view to_string(PlanStep step) {
  switch (step) {
  case PlanStep::SaveSliced: return "save-sliced";
  case PlanStep::QueryOptimistic: return "query-optimistic";
  case PlanStep::QueryStrongOptimistic: return "query-strong-optimistic";
  case PlanStep::SaveOptimistic: return "save-optimistic";
  case PlanStep::SaveStrongOptimistic: return "save-strong-optimistic";
  }
  return "?";
}

StrategyPlan plan_queries(const PathPredicate &predicate, std::size_t target_seq,
                          SolveStatus sliced_verdict,
                          std::optional<SolveStatus> optimistic_verdict,
                          std::optional<SolveStatus> strong_verdict, StrategyMode mode) {
  StrategyPlan plan;
  if (sliced_verdict == SolveStatus::Sat) {
    plan.steps.push_back(PlanStep::SaveSliced);
    return plan;
  }
  if (mode == StrategyMode::Default)
    return plan;

  auto build_strong = [&] {
    plan.strong = build_strong_optimistic(predicate, slice(predicate, target_seq), target_seq);
  };

  if (mode == StrategyMode::SoptOnly) {
    build_strong();
    plan.steps.push_back(PlanStep::QueryStrongOptimistic);
    if (!strong_verdict) {
      plan.pending = QueryKind::StrongOptimistic;
      return plan;
    }
    if (*strong_verdict == SolveStatus::Sat)
      plan.steps.push_back(PlanStep::SaveStrongOptimistic);
    return plan;
  }

  plan.steps.push_back(PlanStep::QueryOptimistic);
  if (!optimistic_verdict) {
    plan.pending = QueryKind::Optimistic;
    return plan;
  }
  if (*optimistic_verdict != SolveStatus::Sat)
    return plan;
  if (mode == StrategyMode::OptOnly) {
    plan.steps.push_back(PlanStep::SaveOptimistic);
    return plan;
  }

  build_strong();
  if (same_conjuncts(*plan.strong, build_optimistic(predicate, target_seq))) {
    plan.strong_matches_optimistic = true;
    plan.steps.push_back(PlanStep::SaveOptimistic);
    return plan;
  }
  plan.steps.push_back(PlanStep::QueryStrongOptimistic);
  if (!strong_verdict) {
    plan.pending = QueryKind::StrongOptimistic;
    return plan;
  }
  plan.steps.push_back(PlanStep::SaveOptimistic);
  if (*strong_verdict == SolveStatus::Sat)
    plan.steps.push_back(PlanStep::SaveStrongOptimistic);
  return plan;
}

} // namespace sopt
