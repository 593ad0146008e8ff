//===-- vm.hpp - Toy register machine: ISA, assembler, interpreter -------===//
//
// The analysis target of the laboratory. Addresses are instruction indices,
// words are unsigned 32-bit, and the only source of symbolic data is the
// INPUT instruction which zero-extends one byte of the seed buffer.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sopt {

using Address = std::uint32_t;
using Word = std::uint32_t;
using Bytes = std::vector<std::uint8_t>;

inline constexpr unsigned kNumRegisters = 16;
inline constexpr std::uint64_t kDefaultStepLimit = 1'000'000;

enum class Opcode : std::uint8_t {
  Input,
  Const,
  Mov,
  Add,
  Sub,
  Mul,
  And,
  Or,
  Xor,
  Shl,
  Shr,
  Jeq,
  Jne,
  Jlt,
  Jle,
  Jgt,
  Jge,
  Jlts,
  Jles,
  Jgts,
  Jges,
  Jmp,
  Call,
  Ret,
  Halt,
};

std::string_view mnemonic(Opcode op);
std::optional<Opcode> opcode_from_mnemonic(std::string_view text);

constexpr bool is_conditional_jump(Opcode op) {
  return op >= Opcode::Jeq && op <= Opcode::Jges;
}

constexpr bool is_alu(Opcode op) {
  return op >= Opcode::Add && op <= Opcode::Shr;
}

constexpr bool has_target(Opcode op) {
  return is_conditional_jump(op) || op == Opcode::Jmp || op == Opcode::Call;
}

/// Word arithmetic shared by every execution engine. Shifts by 32 or more
/// produce zero, matching bvshl/bvlshr.
Word alu(Opcode op, Word lhs, Word rhs);

/// Whether the conditional jump `op` is taken for operands (lhs, rhs).
bool branch_taken(Opcode op, Word lhs, Word rhs);

struct Instruction {
  Opcode op = Opcode::Halt;
  std::uint8_t rd = 0;
  std::uint8_t ra = 0;
  std::uint8_t rb = 0;
  Word imm = 0;        // CONST value, INPUT byte index
  Address target = 0;  // jump/call destination

  friend bool operator==(const Instruction &, const Instruction &) = default;
};

struct Function {
  std::string name;
  Address entry = 0;

  friend bool operator==(const Function &, const Function &) = default;
};

struct Program {
  std::vector<Instruction> instructions;
  std::size_t input_length = 0;
  Address entry = 0;
  // Sorted by entry; contains main and every CALL target.
  std::vector<Function> functions;

  std::size_t size() const { return instructions.size(); }
  const Instruction &at(Address a) const { return instructions.at(a); }
  const Function *function_at(Address entry_address) const;

  friend bool operator==(const Program &, const Program &) = default;
};

class AsmError : public std::runtime_error {
public:
  AsmError(std::size_t line, std::size_t column, std::string token,
           const std::string &message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string &token() const { return token_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

/// Assembles the textual format: one instruction per line, `label:`
/// definitions, `;` comments, `.input N`. The entry point is the `main`
/// label when present, address 0 otherwise.
Program assemble(std::string_view source);

/// Inverse of assemble(): assemble(disassemble(p)) == p.
std::string disassemble(const Program &program);

enum class Termination { Halt, StepLimit, Fault };

std::string_view to_string(Termination t);

struct Edge {
  Address from = 0;
  Address to = 0;

  friend auto operator<=>(const Edge &, const Edge &) = default;
};

struct BranchEvent {
  Address src = 0;
  bool taken = false;
  std::uint32_t occurrence = 0;  // nth execution of this jump site
  std::size_t edge_index = 0;    // position of the matching edge

  friend bool operator==(const BranchEvent &, const BranchEvent &) = default;
};

/// Control-flow edges are recorded for every executed jump, call and return.
struct ExecTrace {
  std::vector<Edge> edges;
  std::vector<BranchEvent> branch_events;
  Termination terminated = Termination::Halt;
  std::uint64_t steps = 0;
  std::string fault;

  friend bool operator==(const ExecTrace &, const ExecTrace &) = default;
};

ExecTrace run_concrete(const Program &program,
                       std::span<const std::uint8_t> input,
                       std::uint64_t step_limit = kDefaultStepLimit);

/// Number of unique edges over all runs (afl-showmap style). Faulting runs
/// still contribute the edges they executed.
std::size_t edge_coverage(const Program &program,
                          std::span<const Bytes> corpus,
                          std::uint64_t step_limit = kDefaultStepLimit);

} // namespace sopt
