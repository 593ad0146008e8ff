//===-- expr.hpp - Symbolic expressions over input bytes -----------------===//
//
// Immutable expression trees shared through ExprRef. The builders in
// namespace `expr` fold constants and apply a few rewrites that keep branch
// conditions readable (e.g. `(a ^ c) == 0` becomes `a == c`), so the
// conditions recorded by the concolic engine stay close to source form.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "sopt/vm.hpp"

#include <memory>
#include <set>
#include <span>
#include <string>

namespace sopt {

enum class ExprKind : std::uint8_t {
  InputByte,
  Const,
  // 32-bit arithmetic
  Add,
  Sub,
  Mul,
  And,
  Or,
  Xor,
  Shl,
  Shr,
  // comparisons (width 1)
  Eq,
  Ne,
  Ult,
  Ule,
  Ugt,
  Uge,
  Slt,
  Sle,
  Sgt,
  Sge,
  // boolean connectives (width 1)
  BoolConst,
  LogicalAnd,
  LogicalOr,
};

class Expr;
using ExprRef = std::shared_ptr<const Expr>;
using VarSet = std::set<std::size_t>;

class Expr {
public:
  Expr(ExprKind kind, Word value, ExprRef lhs, ExprRef rhs);

  ExprKind kind() const { return kind_; }
  unsigned width() const;
  bool is_boolean() const { return width() == 1; }
  bool is_constant() const { return kind_ == ExprKind::Const || kind_ == ExprKind::BoolConst; }

  /// Constant value, input byte index, or 0/1 for BoolConst.
  Word value() const { return value_; }
  const ExprRef &lhs() const { return lhs_; }
  const ExprRef &rhs() const { return rhs_; }

private:
  ExprKind kind_;
  Word value_;
  ExprRef lhs_;
  ExprRef rhs_;
};

bool is_comparison(ExprKind k);
bool is_arithmetic(ExprKind k);
std::string_view to_string(ExprKind k);

namespace expr {

ExprRef input_byte(std::size_t index);
ExprRef constant(Word value);
ExprRef boolean(bool value);
ExprRef arith(ExprKind kind, ExprRef lhs, ExprRef rhs);
ExprRef compare(ExprKind kind, ExprRef lhs, ExprRef rhs);
ExprRef logical_and(ExprRef lhs, ExprRef rhs);
ExprRef logical_or(ExprRef lhs, ExprRef rhs);

/// Logical negation of a boolean expression, pushed to the comparisons
/// (De Morgan over And/Or, Eq<->Ne, Ult<->Uge, ...).
ExprRef negate(const ExprRef &e);

/// Comparison kind computed by the conditional jump `op`.
ExprKind comparison_for(Opcode op);
ExprKind arithmetic_for(Opcode op);

} // namespace expr

/// Tree-walking evaluation. Booleans evaluate to 0/1.
Word evaluate(const Expr &e, std::span<const std::uint8_t> input);

/// Set of input byte indices appearing in the tree.
VarSet vars(const Expr &e);

bool structurally_equal(const Expr &a, const Expr &b);
bool structurally_equal(const ExprRef &a, const ExprRef &b);

/// Prefix notation, e.g. `(eq (sub in1 in3) 0x1)`.
std::string to_prefix(const Expr &e);

} // namespace sopt
