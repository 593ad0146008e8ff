#include "sopt/vm.hpp"

#include <algorithm>
#include <array>

namespace sopt {

namespace {

struct MnemonicEntry {
  Opcode op;
  std::string_view text;
};

constexpr std::array<MnemonicEntry, 25> kMnemonics{{
    {Opcode::Input, "input"}, {Opcode::Const, "const"}, {Opcode::Mov, "mov"},
    {Opcode::Add, "add"},     {Opcode::Sub, "sub"},     {Opcode::Mul, "mul"},
    {Opcode::And, "and"},     {Opcode::Or, "or"},       {Opcode::Xor, "xor"},
    {Opcode::Shl, "shl"},     {Opcode::Shr, "shr"},     {Opcode::Jeq, "jeq"},
    {Opcode::Jne, "jne"},     {Opcode::Jlt, "jlt"},     {Opcode::Jle, "jle"},
    {Opcode::Jgt, "jgt"},     {Opcode::Jge, "jge"},     {Opcode::Jlts, "jlts"},
    {Opcode::Jles, "jles"},   {Opcode::Jgts, "jgts"},   {Opcode::Jges, "jges"},
    {Opcode::Jmp, "jmp"},     {Opcode::Call, "call"},   {Opcode::Ret, "ret"},
    {Opcode::Halt, "halt"},
}};

} // namespace

std::string_view mnemonic(Opcode op) {
  return kMnemonics[static_cast<std::size_t>(op)].text;
}

std::optional<Opcode> opcode_from_mnemonic(std::string_view text) {
  auto it = std::find_if(kMnemonics.begin(), kMnemonics.end(),
                         [&](const MnemonicEntry &e) { return e.text == text; });
  if (it == kMnemonics.end())
    return std::nullopt;
  return it->op;
}

Word alu(Opcode op, Word lhs, Word rhs) {
  switch (op) {
  case Opcode::Add:
    return lhs + rhs;
  case Opcode::Sub:
    return lhs - rhs;
  case Opcode::Mul:
    return lhs * rhs;
  case Opcode::And:
    return lhs & rhs;
  case Opcode::Or:
    return lhs | rhs;
  case Opcode::Xor:
    return lhs ^ rhs;
  case Opcode::Shl:
    return rhs >= 32 ? 0 : lhs << rhs;
  case Opcode::Shr:
    return rhs >= 32 ? 0 : lhs >> rhs;
  default:
    throw std::logic_error("alu: not an arithmetic opcode");
  }
}

bool branch_taken(Opcode op, Word lhs, Word rhs) {
  const auto slhs = static_cast<std::int32_t>(lhs);
  const auto srhs = static_cast<std::int32_t>(rhs);
  switch (op) {
  case Opcode::Jeq:
    return lhs == rhs;
  case Opcode::Jne:
    return lhs != rhs;
  case Opcode::Jlt:
    return lhs < rhs;
  case Opcode::Jle:
    return lhs <= rhs;
  case Opcode::Jgt:
    return lhs > rhs;
  case Opcode::Jge:
    return lhs >= rhs;
  case Opcode::Jlts:
    return slhs < srhs;
  case Opcode::Jles:
    return slhs <= srhs;
  case Opcode::Jgts:
    return slhs > srhs;
  case Opcode::Jges:
    return slhs >= srhs;
  default:
    throw std::logic_error("branch_taken: not a conditional jump");
  }
}

const Function *Program::function_at(Address entry_address) const {
  auto it = std::find_if(functions.begin(), functions.end(),
                         [&](const Function &f) { return f.entry == entry_address; });
  return it == functions.end() ? nullptr : &*it;
}

std::string_view to_string(Termination t) {
  switch (t) {
  case Termination::Halt:
    return "halt";
  case Termination::StepLimit:
    return "step-limit";
  case Termination::Fault:
    return "fault";
  }
  return "?";
}

} // namespace sopt
