#include "kernels.hpp"

#include <algorithm>
#include <unordered_map>

namespace sopt {

QueryTooWide::QueryTooWide(std::size_t width)
    : std::runtime_error("query too wide for exact solving (" + std::to_string(width) +
                         " symbolic bytes)"),
      width_(width) {}

CompiledQuery::CompiledQuery(std::span<const ExprRef> conjuncts) {
  VarSet all;
  for (const ExprRef &c : conjuncts) {
    VarSet v = sopt::vars(*c);
    all.insert(v.begin(), v.end());
  }
  vars_.assign(all.begin(), all.end());

  std::unordered_map<const Expr *, std::uint32_t> index;
  // Post-order without recursion; each node emitted once.
  auto emit = [&](const Expr *root) {
    std::vector<std::pair<const Expr *, bool>> work{{root, false}};
    while (!work.empty()) {
      auto [node, expanded] = work.back();
      work.pop_back();
      if (index.count(node))
        continue;
      if (node->lhs() && !expanded) {
        work.push_back({node, true});
        work.push_back({node->rhs().get(), false});
        work.push_back({node->lhs().get(), false});
        continue;
      }
      Op op{node->kind(), node->value(), 0, 0};
      if (node->kind() == ExprKind::InputByte) {
        auto it = std::lower_bound(vars_.begin(), vars_.end(), node->value());
        op.value = static_cast<Word>(it - vars_.begin());
      } else if (node->lhs()) {
        op.lhs = index.at(node->lhs().get());
        op.rhs = index.at(node->rhs().get());
      }
      index.emplace(node, static_cast<std::uint32_t>(ops_.size()));
      ops_.push_back(op);
    }
    return index.at(root);
  };
  for (const ExprRef &c : conjuncts)
    roots_.push_back(emit(c.get()));
}

bool CompiledQuery::satisfied(std::span<const std::uint8_t> slots,
                              std::span<Word> scratch) const {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op &op = ops_[i];
    const Word a = scratch[op.lhs];
    const Word b = scratch[op.rhs];
    Word r = 0;
    switch (op.kind) {
    case ExprKind::InputByte: r = slots[op.value]; break;
    case ExprKind::Const:
    case ExprKind::BoolConst: r = op.value; break;
    case ExprKind::Add: r = a + b; break;
    case ExprKind::Sub: r = a - b; break;
    case ExprKind::Mul: r = a * b; break;
    case ExprKind::And: r = a & b; break;
    case ExprKind::Or: r = a | b; break;
    case ExprKind::Xor: r = a ^ b; break;
    case ExprKind::Shl: r = b >= 32 ? 0 : a << b; break;
    case ExprKind::Shr: r = b >= 32 ? 0 : a >> b; break;
    case ExprKind::Eq: r = a == b; break;
    case ExprKind::Ne: r = a != b; break;
    case ExprKind::Ult: r = a < b; break;
    case ExprKind::Ule: r = a <= b; break;
    case ExprKind::Ugt: r = a > b; break;
    case ExprKind::Uge: r = a >= b; break;
    case ExprKind::Slt: r = static_cast<std::int32_t>(a) < static_cast<std::int32_t>(b); break;
    case ExprKind::Sle: r = static_cast<std::int32_t>(a) <= static_cast<std::int32_t>(b); break;
    case ExprKind::Sgt: r = static_cast<std::int32_t>(a) > static_cast<std::int32_t>(b); break;
    case ExprKind::Sge: r = static_cast<std::int32_t>(a) >= static_cast<std::int32_t>(b); break;
    case ExprKind::LogicalAnd: r = a && b; break;
    case ExprKind::LogicalOr: r = a || b; break;
    }
    scratch[i] = r;
  }
  return std::all_of(roots_.begin(), roots_.end(),
                     [&](std::uint32_t root) { return scratch[root] != 0; });
}

Verdict solve_conjuncts(std::span<const ExprRef> conjuncts, std::span<const std::uint8_t> seed,
                        const SolverBudget &budget, Kernel kernel) {
  const auto start = std::chrono::steady_clock::now();
  CompiledQuery query(conjuncts);
  const std::size_t width = query.vars().size();
  if (width > budget.max_bytes || width > 7)
    throw QueryTooWide(width);

  std::vector<std::uint8_t> origin;
  for (std::size_t v : query.vars()) {
    if (v >= seed.size())
      throw std::invalid_argument("query mentions byte " + std::to_string(v) +
                                  " beyond the seed");
    origin.push_back(seed[v]);
  }

  detail::SearchSpace space{query, origin, std::uint64_t{1} << (8 * width),
                            start + budget.time_limit};
  detail::SearchResult found = kernel == Kernel::Serial ? detail::search_serial(space)
                                                        : detail::search_parallel(space);

  Verdict verdict;
  verdict.stats.candidates_tried = found.tried;
  if (found.index) {
    std::vector<std::uint8_t> slots(width);
    detail::decode(*found.index, origin, slots);
    Model model;
    for (std::size_t j = 0; j < width; ++j)
      model.emplace(query.vars()[j], slots[j]);
    verdict.status = SolveStatus::Sat;
    verdict.model = std::move(model);
  } else {
    verdict.status = found.timed_out ? SolveStatus::Timeout : SolveStatus::Unsat;
  }
  verdict.stats.elapsed = std::chrono::steady_clock::now() - start;
  return verdict;
}

Verdict solve(const InversionQuery &query, std::span<const std::uint8_t> seed,
              const SolverBudget &budget, Kernel kernel) {
  return solve_conjuncts(query.conjuncts, seed, budget, kernel);
}

Bytes merge_model(const Model &model, std::span<const std::uint8_t> seed) {
  Bytes out(seed.begin(), seed.end());
  for (const auto &[index, value] : model)
    out.at(index) = value;
  return out;
}

} // namespace sopt
