#include "sopt/strategies.hpp"

#include <sstream>

namespace sopt {

std::string_view to_string(QueryKind kind) {
  switch (kind) {
  case QueryKind::Sliced: return "sliced";
  case QueryKind::Optimistic: return "optimistic";
  case QueryKind::StrongOptimistic: return "strong_optimistic";
  }
  return "?";
}

bool same_conjuncts(const InversionQuery &a, const InversionQuery &b) {
  if (a.conjuncts.size() != b.conjuncts.size())
    return false;
  for (std::size_t i = 0; i < a.conjuncts.size(); ++i)
    if (!structurally_equal(a.conjuncts[i], b.conjuncts[i]))
      return false;
  return true;
}

std::string dump_query(const InversionQuery &query) {
  std::ostringstream out;
  out << to_string(query.kind) << "; " << query.target_seq << "; [";
  for (std::size_t seq : query.included)
    out << seq << ',';
  out << "NEG]";
  return out.str();
}

InversionQuery slice(const PathPredicate &predicate, std::size_t target_seq) {
  const BranchConstraint &target = predicate[target_seq];

  std::vector<VarSet> constraint_vars;
  constraint_vars.reserve(target_seq);
  for (std::size_t i = 0; i < target_seq; ++i)
    constraint_vars.push_back(vars(*predicate[i].expr));

  auto intersects = [](const VarSet &a, const VarSet &b) {
    for (std::size_t v : a)
      if (b.count(v))
        return true;
    return false;
  };

  // Fixpoint: grow the closure until no earlier constraint adds a byte.
  VarSet closure = vars(*target.expr);
  std::vector<bool> kept(target_seq, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < target_seq; ++i) {
      if (kept[i] || !intersects(constraint_vars[i], closure))
        continue;
      kept[i] = true;
      changed = true;
      closure.insert(constraint_vars[i].begin(), constraint_vars[i].end());
    }
  }

  InversionQuery q;
  q.kind = QueryKind::Sliced;
  q.target_seq = target_seq;
  for (std::size_t i = 0; i < target_seq; ++i)
    if (kept[i]) {
      q.included.push_back(i);
      q.conjuncts.push_back(predicate[i].expr);
    }
  q.conjuncts.push_back(expr::negate(target.expr));
  return q;
}

InversionQuery build_optimistic(const PathPredicate &predicate, std::size_t target_seq) {
  InversionQuery q;
  q.kind = QueryKind::Optimistic;
  q.target_seq = target_seq;
  q.conjuncts.push_back(expr::negate(predicate[target_seq].expr));
  return q;
}

std::string_view to_string(SweepStep::Action action) {
  switch (action) {
  case SweepStep::Action::SkippedNotPrefix: return "skipped-not-prefix";
  case SweepStep::Action::IncludedNested: return "included-nested";
  case SweepStep::Action::IncludedCti: return "included-cti";
  case SweepStep::Action::Excluded: return "excluded";
  }
  return "?";
}

InversionQuery build_strong_optimistic(const PathPredicate &predicate,
                                       const InversionQuery &sliced, std::size_t target_seq,
                                       std::vector<SweepStep> *sweep) {
  const BranchConstraint &target = predicate[target_seq];
  Address point = target.src;
  CallStackSnapshot cs = target.stack;
  std::vector<std::size_t> kept;  // nearest first

  for (auto it = sliced.included.rbegin(); it != sliced.included.rend(); ++it) {
    const BranchConstraint &c = predicate[*it];
    SweepStep step;
    step.seq = c.seq;

    if (!c.stack.is_prefix_of(cs)) {
      step.action = SweepStep::Action::SkippedNotPrefix;
    } else {
      if (c.stack.size() < cs.size()) {
        point = cs.frames[c.stack.size()].call_site;
        cs = c.stack;
        step.frame_update = true;
      }
      if (c.src <= point && point < c.dst)
        step.action = SweepStep::Action::IncludedNested;
      else if (c.has_cti)
        step.action = SweepStep::Action::IncludedCti;
      else
        step.action = SweepStep::Action::Excluded;
      if (step.action != SweepStep::Action::Excluded)
        kept.push_back(c.seq);
    }
    step.point = point;
    step.stack = cs;
    if (sweep)
      sweep->push_back(std::move(step));
  }

  InversionQuery q;
  q.kind = QueryKind::StrongOptimistic;
  q.target_seq = target_seq;
  for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
    q.included.push_back(*it);
    q.conjuncts.push_back(predicate[*it].expr);
  }
  q.conjuncts.push_back(expr::negate(target.expr));
  return q;
}

} // namespace sopt
