#include "sopt/vm.hpp"

#include <array>
#include <set>

namespace sopt {

ExecTrace run_concrete(const Program &program, std::span<const std::uint8_t> input,
                       std::uint64_t step_limit) {
  if (input.size() != program.input_length)
    throw std::invalid_argument("input length " + std::to_string(input.size()) +
                                " does not match program input length " +
                                std::to_string(program.input_length));

  ExecTrace trace;
  std::array<Word, kNumRegisters> regs{};
  std::vector<Address> returns;
  std::vector<std::uint32_t> occurrences(program.size(), 0);
  Address pc = program.entry;

  auto fault = [&](std::string why) {
    trace.terminated = Termination::Fault;
    trace.fault = std::move(why);
  };

  for (;;) {
    if (trace.steps >= step_limit) {
      trace.terminated = Termination::StepLimit;
      break;
    }
    if (pc >= program.size()) {
      fault("pc " + std::to_string(pc) + " outside program");
      break;
    }
    const Instruction &ins = program.instructions[pc];
    ++trace.steps;

    if (is_alu(ins.op)) {
      regs[ins.rd] = alu(ins.op, regs[ins.ra], regs[ins.rb]);
      ++pc;
      continue;
    }
    if (is_conditional_jump(ins.op)) {
      const bool taken = branch_taken(ins.op, regs[ins.ra], regs[ins.rb]);
      const Address next = taken ? ins.target : pc + 1;
      trace.edges.push_back({pc, next});
      trace.branch_events.push_back(
          {pc, taken, occurrences[pc]++, trace.edges.size() - 1});
      pc = next;
      continue;
    }

    bool stop = false;
    switch (ins.op) {
    case Opcode::Input:
      regs[ins.rd] = input[ins.imm];
      ++pc;
      break;
    case Opcode::Const:
      regs[ins.rd] = ins.imm;
      ++pc;
      break;
    case Opcode::Mov:
      regs[ins.rd] = regs[ins.ra];
      ++pc;
      break;
    case Opcode::Jmp:
      trace.edges.push_back({pc, ins.target});
      pc = ins.target;
      break;
    case Opcode::Call:
      returns.push_back(pc + 1);
      trace.edges.push_back({pc, ins.target});
      pc = ins.target;
      break;
    case Opcode::Ret:
      if (returns.empty()) {
        fault("ret with empty call stack at " + std::to_string(pc));
        stop = true;
        break;
      }
      trace.edges.push_back({pc, returns.back()});
      pc = returns.back();
      returns.pop_back();
      break;
    case Opcode::Halt:
      trace.terminated = Termination::Halt;
      stop = true;
      break;
    default:
      break;
    }
    if (stop)
      break;
  }
  return trace;
}

std::size_t edge_coverage(const Program &program, std::span<const Bytes> corpus,
                          std::uint64_t step_limit) {
  std::set<Edge> seen;
  for (const Bytes &input : corpus) {
    ExecTrace trace = run_concrete(program, input, step_limit);
    seen.insert(trace.edges.begin(), trace.edges.end());
  }
  return seen.size();
}

} // namespace sopt
