#include "sopt/expr.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace sopt {

Expr::Expr(ExprKind kind, Word value, ExprRef lhs, ExprRef rhs)
    : kind_(kind), value_(value), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

unsigned Expr::width() const {
  if (is_comparison(kind_) || kind_ == ExprKind::BoolConst ||
      kind_ == ExprKind::LogicalAnd || kind_ == ExprKind::LogicalOr)
    return 1;
  return 32;
}

bool is_comparison(ExprKind k) { return k >= ExprKind::Eq && k <= ExprKind::Sge; }

bool is_arithmetic(ExprKind k) { return k >= ExprKind::Add && k <= ExprKind::Shr; }

std::string_view to_string(ExprKind k) {
  switch (k) {
  case ExprKind::InputByte: return "in";
  case ExprKind::Const: return "const";
  case ExprKind::Add: return "add";
  case ExprKind::Sub: return "sub";
  case ExprKind::Mul: return "mul";
  case ExprKind::And: return "and";
  case ExprKind::Or: return "or";
  case ExprKind::Xor: return "xor";
  case ExprKind::Shl: return "shl";
  case ExprKind::Shr: return "shr";
  case ExprKind::Eq: return "eq";
  case ExprKind::Ne: return "ne";
  case ExprKind::Ult: return "ult";
  case ExprKind::Ule: return "ule";
  case ExprKind::Ugt: return "ugt";
  case ExprKind::Uge: return "uge";
  case ExprKind::Slt: return "slt";
  case ExprKind::Sle: return "sle";
  case ExprKind::Sgt: return "sgt";
  case ExprKind::Sge: return "sge";
  case ExprKind::BoolConst: return "bool";
  case ExprKind::LogicalAnd: return "land";
  case ExprKind::LogicalOr: return "lor";
  }
  return "?";
}

namespace {

Word apply_arith(ExprKind k, Word a, Word b) {
  switch (k) {
  case ExprKind::Add: return a + b;
  case ExprKind::Sub: return a - b;
  case ExprKind::Mul: return a * b;
  case ExprKind::And: return a & b;
  case ExprKind::Or: return a | b;
  case ExprKind::Xor: return a ^ b;
  case ExprKind::Shl: return b >= 32 ? 0 : a << b;
  case ExprKind::Shr: return b >= 32 ? 0 : a >> b;
  default: throw std::logic_error("not an arithmetic kind");
  }
}

bool apply_compare(ExprKind k, Word a, Word b) {
  const auto sa = static_cast<std::int32_t>(a);
  const auto sb = static_cast<std::int32_t>(b);
  switch (k) {
  case ExprKind::Eq: return a == b;
  case ExprKind::Ne: return a != b;
  case ExprKind::Ult: return a < b;
  case ExprKind::Ule: return a <= b;
  case ExprKind::Ugt: return a > b;
  case ExprKind::Uge: return a >= b;
  case ExprKind::Slt: return sa < sb;
  case ExprKind::Sle: return sa <= sb;
  case ExprKind::Sgt: return sa > sb;
  case ExprKind::Sge: return sa >= sb;
  default: throw std::logic_error("not a comparison kind");
  }
}

ExprKind complement(ExprKind k) {
  switch (k) {
  case ExprKind::Eq: return ExprKind::Ne;
  case ExprKind::Ne: return ExprKind::Eq;
  case ExprKind::Ult: return ExprKind::Uge;
  case ExprKind::Uge: return ExprKind::Ult;
  case ExprKind::Ule: return ExprKind::Ugt;
  case ExprKind::Ugt: return ExprKind::Ule;
  case ExprKind::Slt: return ExprKind::Sge;
  case ExprKind::Sge: return ExprKind::Slt;
  case ExprKind::Sle: return ExprKind::Sgt;
  case ExprKind::Sgt: return ExprKind::Sle;
  default: throw std::logic_error("not a comparison kind");
  }
}

ExprRef make(ExprKind k, Word value, ExprRef lhs = nullptr, ExprRef rhs = nullptr) {
  return std::make_shared<const Expr>(k, value, std::move(lhs), std::move(rhs));
}

bool is_const(const ExprRef &e, Word v) {
  return e->kind() == ExprKind::Const && e->value() == v;
}

Word eval_memo(const Expr &e, std::span<const std::uint8_t> input,
               std::unordered_map<const Expr *, Word> &memo) {
  switch (e.kind()) {
  case ExprKind::InputByte: return input[e.value()];
  case ExprKind::Const:
  case ExprKind::BoolConst: return e.value();
  default: break;
  }
  if (auto it = memo.find(&e); it != memo.end())
    return it->second;
  const Word a = eval_memo(*e.lhs(), input, memo);
  const Word b = eval_memo(*e.rhs(), input, memo);
  Word r;
  if (is_arithmetic(e.kind()))
    r = apply_arith(e.kind(), a, b);
  else if (is_comparison(e.kind()))
    r = apply_compare(e.kind(), a, b) ? 1 : 0;
  else if (e.kind() == ExprKind::LogicalAnd)
    r = (a && b) ? 1 : 0;
  else
    r = (a || b) ? 1 : 0;
  memo.emplace(&e, r);
  return r;
}

void prefix_into(const Expr &e, std::string &out) {
  char buf[16];
  switch (e.kind()) {
  case ExprKind::InputByte:
    out += "in" + std::to_string(e.value());
    return;
  case ExprKind::Const:
    std::snprintf(buf, sizeof buf, "0x%x", e.value());
    out += buf;
    return;
  case ExprKind::BoolConst:
    out += e.value() ? "true" : "false";
    return;
  default:
    out += '(';
    out += to_string(e.kind());
    out += ' ';
    prefix_into(*e.lhs(), out);
    out += ' ';
    prefix_into(*e.rhs(), out);
    out += ')';
  }
}

} // namespace

namespace expr {

ExprRef input_byte(std::size_t index) {
  return make(ExprKind::InputByte, static_cast<Word>(index));
}

ExprRef constant(Word value) { return make(ExprKind::Const, value); }

ExprRef boolean(bool value) { return make(ExprKind::BoolConst, value ? 1 : 0); }

ExprRef arith(ExprKind kind, ExprRef lhs, ExprRef rhs) {
  if (!is_arithmetic(kind))
    throw std::invalid_argument("arith: not an arithmetic kind");
  if (lhs->kind() == ExprKind::Const && rhs->kind() == ExprKind::Const)
    return constant(apply_arith(kind, lhs->value(), rhs->value()));
  return make(kind, 0, std::move(lhs), std::move(rhs));
}

ExprRef compare(ExprKind kind, ExprRef lhs, ExprRef rhs) {
  if (!is_comparison(kind))
    throw std::invalid_argument("compare: not a comparison kind");
  if (lhs->kind() == ExprKind::Const && rhs->kind() == ExprKind::Const)
    return boolean(apply_compare(kind, lhs->value(), rhs->value()));

  if (kind == ExprKind::Eq || kind == ExprKind::Ne) {
    if (lhs->kind() == ExprKind::Const)
      std::swap(lhs, rhs);
    if (rhs->kind() == ExprKind::Const && lhs->kind() == ExprKind::Xor) {
      // (a ^ c1) == c2  <=>  a == c1 ^ c2
      const ExprRef &a = lhs->lhs();
      const ExprRef &b = lhs->rhs();
      if (b->kind() == ExprKind::Const)
        return compare(kind, a, constant(b->value() ^ rhs->value()));
      if (a->kind() == ExprKind::Const)
        return compare(kind, b, constant(a->value() ^ rhs->value()));
      if (rhs->value() == 0)
        return compare(kind, a, b);
    }
    if (is_const(rhs, 0) && lhs->kind() == ExprKind::Or) {
      // (a | b) == 0  <=>  a == 0 && b == 0
      ExprRef a = compare(kind, lhs->lhs(), rhs);
      ExprRef b = compare(kind, lhs->rhs(), rhs);
      return kind == ExprKind::Eq ? logical_and(a, b) : logical_or(a, b);
    }
  }
  return make(kind, 0, std::move(lhs), std::move(rhs));
}

ExprRef logical_and(ExprRef lhs, ExprRef rhs) {
  if (lhs->kind() == ExprKind::BoolConst)
    return lhs->value() ? rhs : lhs;
  if (rhs->kind() == ExprKind::BoolConst)
    return rhs->value() ? lhs : rhs;
  return make(ExprKind::LogicalAnd, 0, std::move(lhs), std::move(rhs));
}

ExprRef logical_or(ExprRef lhs, ExprRef rhs) {
  if (lhs->kind() == ExprKind::BoolConst)
    return lhs->value() ? lhs : rhs;
  if (rhs->kind() == ExprKind::BoolConst)
    return rhs->value() ? rhs : lhs;
  return make(ExprKind::LogicalOr, 0, std::move(lhs), std::move(rhs));
}

ExprRef negate(const ExprRef &e) {
  switch (e->kind()) {
  case ExprKind::BoolConst:
    return boolean(e->value() == 0);
  case ExprKind::LogicalAnd:
    return logical_or(negate(e->lhs()), negate(e->rhs()));
  case ExprKind::LogicalOr:
    return logical_and(negate(e->lhs()), negate(e->rhs()));
  default:
    if (!is_comparison(e->kind()))
      throw std::invalid_argument("negate: expression is not boolean");
    return make(complement(e->kind()), 0, e->lhs(), e->rhs());
  }
}

ExprKind comparison_for(Opcode op) {
  switch (op) {
  case Opcode::Jeq: return ExprKind::Eq;
  case Opcode::Jne: return ExprKind::Ne;
  case Opcode::Jlt: return ExprKind::Ult;
  case Opcode::Jle: return ExprKind::Ule;
  case Opcode::Jgt: return ExprKind::Ugt;
  case Opcode::Jge: return ExprKind::Uge;
  case Opcode::Jlts: return ExprKind::Slt;
  case Opcode::Jles: return ExprKind::Sle;
  case Opcode::Jgts: return ExprKind::Sgt;
  case Opcode::Jges: return ExprKind::Sge;
  default: throw std::invalid_argument("comparison_for: not a conditional jump");
  }
}

ExprKind arithmetic_for(Opcode op) {
  switch (op) {
  case Opcode::Add: return ExprKind::Add;
  case Opcode::Sub: return ExprKind::Sub;
  case Opcode::Mul: return ExprKind::Mul;
  case Opcode::And: return ExprKind::And;
  case Opcode::Or: return ExprKind::Or;
  case Opcode::Xor: return ExprKind::Xor;
  case Opcode::Shl: return ExprKind::Shl;
  case Opcode::Shr: return ExprKind::Shr;
  default: throw std::invalid_argument("arithmetic_for: not an ALU opcode");
  }
}

} // namespace expr

Word evaluate(const Expr &e, std::span<const std::uint8_t> input) {
  std::unordered_map<const Expr *, Word> memo;
  return eval_memo(e, input, memo);
}

VarSet vars(const Expr &e) {
  VarSet out;
  std::unordered_set<const Expr *> seen;
  std::vector<const Expr *> work{&e};
  while (!work.empty()) {
    const Expr *n = work.back();
    work.pop_back();
    if (n->kind() == ExprKind::InputByte) {
      out.insert(n->value());
      continue;
    }
    if (!n->lhs() || !seen.insert(n).second)
      continue;
    work.push_back(n->lhs().get());
    work.push_back(n->rhs().get());
  }
  return out;
}

bool structurally_equal(const Expr &a, const Expr &b) {
  if (&a == &b)
    return true;
  if (a.kind() != b.kind() || a.value() != b.value())
    return false;
  if (!a.lhs())
    return true;
  return structurally_equal(*a.lhs(), *b.lhs()) && structurally_equal(*a.rhs(), *b.rhs());
}

bool structurally_equal(const ExprRef &a, const ExprRef &b) {
  if (!a || !b)
    return a == b;
  return structurally_equal(*a, *b);
}

std::string to_prefix(const Expr &e) {
  std::string out;
  prefix_into(e, out);
  return out;
}

} // namespace sopt
