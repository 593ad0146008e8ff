//===-- solver.hpp - Exact enumeration solver and SMT-LIB export ---------===//
//
// Queries in this laboratory mention at most a handful of input bytes, so
// satisfiability is decided exactly by enumerating every assignment to the
// query's bytes. Enumeration starts at the seed values and counts upwards
// with wraparound, the first byte (lowest index) being the most significant
// digit; the first satisfying assignment is returned, which makes models
// reproducible byte for byte.
//
// Two kernels walk the same candidate order: a serial reference and an
// OpenMP kernel that searches fixed-size blocks in parallel and keeps the
// lowest satisfying candidate of each block. Both return identical verdicts.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "sopt/strategies.hpp"

#include <chrono>
#include <map>

namespace sopt {

using Model = std::map<std::size_t, std::uint8_t>;

struct SolveStats {
  std::uint64_t candidates_tried = 0;
  std::chrono::nanoseconds elapsed{0};
};

struct Verdict {
  SolveStatus status = SolveStatus::Unsat;
  std::optional<Model> model;  // present iff SAT
  SolveStats stats;
};

struct SolverBudget {
  std::size_t max_bytes = 3;
  std::chrono::milliseconds time_limit{10'000};
};

enum class Kernel : std::uint8_t { Serial, Parallel };

class QueryTooWide : public std::runtime_error {
public:
  explicit QueryTooWide(std::size_t width);
  std::size_t width() const { return width_; }

private:
  std::size_t width_;
};

/// Conjunction flattened to a straight-line program over the query's bytes.
/// Shared subtrees are evaluated once.
class CompiledQuery {
public:
  explicit CompiledQuery(std::span<const ExprRef> conjuncts);

  /// Sorted input-byte indices the query mentions.
  const std::vector<std::size_t> &vars() const { return vars_; }
  std::size_t scratch_size() const { return ops_.size(); }

  /// `slots[i]` is the value of byte vars()[i]; `scratch` must hold
  /// scratch_size() words.
  bool satisfied(std::span<const std::uint8_t> slots, std::span<Word> scratch) const;

private:
  struct Op {
    ExprKind kind;
    Word value;  // constant, or slot index for InputByte
    std::uint32_t lhs;
    std::uint32_t rhs;
  };

  std::vector<Op> ops_;
  std::vector<std::uint32_t> roots_;
  std::vector<std::size_t> vars_;
};

/// Decides `conjuncts` over the bytes they mention, keeping every other byte
/// at its seed value. Throws QueryTooWide when more than budget.max_bytes
/// bytes are involved.
Verdict solve_conjuncts(std::span<const ExprRef> conjuncts, std::span<const std::uint8_t> seed,
                        const SolverBudget &budget = {}, Kernel kernel = Kernel::Parallel);

Verdict solve(const InversionQuery &query, std::span<const std::uint8_t> seed,
              const SolverBudget &budget = {}, Kernel kernel = Kernel::Parallel);

/// output[i] = model[i] if bound, else seed[i].
Bytes merge_model(const Model &model, std::span<const std::uint8_t> seed);

/// SMT-LIB 2 script (QF_BV): one `k!<index>` 8-bit constant per byte, one
/// assertion per conjunct, then check-sat and get-model.
std::string export_smt(const InversionQuery &query);

/// Runs an external solver process: the script goes to its stdin, the first
/// output line is `sat`, `unsat` or `unknown`, and the rest holds model
/// bindings for `k!<index>` (any of `#xNN`, `#bNNNNNNNN`, `(_ bvN 8)`).
class ExternalSolver {
public:
  explicit ExternalSolver(std::string command);

  Verdict solve(const InversionQuery &query) const;
  const std::string &command() const { return command_; }

  /// Parses solver output; exposed for tests.
  static Verdict parse_output(std::string_view output);

private:
  std::string command_;
};

} // namespace sopt
