//===-- concolic.hpp - Path predicate construction -----------------------===//
#pragma once

#include "sopt/expr.hpp"
#include "sopt/vm.hpp"

#include <limits>

namespace sopt {

/// Call site of the outermost frame, which has no caller.
inline constexpr Address kRootCallSite = std::numeric_limits<Address>::max();

/// Expressions deeper than this are concretized to bound tree growth in
/// long-running loops.
inline constexpr unsigned kMaxSymbolicDepth = 512;

struct Frame {
  Address call_site = kRootCallSite;
  Address callee_entry = 0;
  std::uint32_t depth = 0;

  friend bool operator==(const Frame &, const Frame &) = default;
};

/// Outermost frame first; frames[i].depth == i.
struct CallStackSnapshot {
  std::vector<Frame> frames;

  std::size_t size() const { return frames.size(); }

  /// Element-wise call-site equality from index 0. A stack is a prefix of
  /// itself.
  bool is_prefix_of(const CallStackSnapshot &other) const;

  friend bool operator==(const CallStackSnapshot &, const CallStackSnapshot &) = default;
};

struct BranchConstraint {
  ExprRef expr;  // condition as it held on the run
  Address src = 0;
  Address dst = 0;  // taken-target of the jump
  bool taken = false;
  std::uint32_t occurrence = 0;
  CallStackSnapshot stack;
  bool has_cti = false;
  std::size_t seq = 0;
};

struct PathPredicate {
  std::vector<BranchConstraint> constraints;
  Bytes seed;
  Termination terminated = Termination::Halt;

  std::size_t size() const { return constraints.size(); }
  const BranchConstraint &operator[](std::size_t seq) const { return constraints.at(seq); }
};

/// Runs `program` on `seed` concretely while tracking symbolic values, and
/// records one constraint per executed conditional jump whose condition
/// depends on the input. Follows exactly the path of run_concrete().
PathPredicate run_concolic(const Program &program, std::span<const std::uint8_t> seed,
                           std::uint64_t step_limit = kDefaultStepLimit);

/// True iff the forward scope (src, dst) contains a RET, or a jump whose
/// target lies beyond dst. Backward scopes (dst <= src) never qualify.
bool scan_cti(const Program &program, Address src, Address dst);

/// One line per constraint:
/// `seq; src; dst; taken; has_cti; stack=[...]; expr=<prefix>`.
std::string dump_trace(const PathPredicate &predicate);

std::string format_stack(const CallStackSnapshot &stack);

} // namespace sopt
