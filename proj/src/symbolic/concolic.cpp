#include "sopt/concolic.hpp"

#include <array>
#include <sstream>
#include <unordered_map>

namespace sopt {

bool CallStackSnapshot::is_prefix_of(const CallStackSnapshot &other) const {
  if (frames.size() > other.frames.size())
    return false;
  for (std::size_t i = 0; i < frames.size(); ++i)
    if (frames[i].call_site != other.frames[i].call_site)
      return false;
  return true;
}

bool scan_cti(const Program &program, Address src, Address dst) {
  if (dst <= src)
    return false;
  for (Address a = src + 1; a < dst && a < program.size(); ++a) {
    const Instruction &ins = program.instructions[a];
    if (ins.op == Opcode::Ret)
      return true;
    if ((ins.op == Opcode::Jmp || is_conditional_jump(ins.op)) && ins.target > dst)
      return true;
  }
  return false;
}

namespace {

// Concrete value plus an optional symbolic shadow.
struct Value {
  Word concrete = 0;
  ExprRef sym;
};

class DepthCache {
public:
  unsigned depth(const ExprRef &e) {
    if (!e || !e->lhs())
      return 1;
    if (auto it = cache_.find(e.get()); it != cache_.end())
      return it->second;
    unsigned d = 1 + std::max(depth(e->lhs()), depth(e->rhs()));
    cache_.emplace(e.get(), d);
    return d;
  }

private:
  std::unordered_map<const Expr *, unsigned> cache_;
};

} // namespace

PathPredicate run_concolic(const Program &program, std::span<const std::uint8_t> seed,
                           std::uint64_t step_limit) {
  if (seed.size() != program.input_length)
    throw std::invalid_argument("seed length " + std::to_string(seed.size()) +
                                " does not match program input length " +
                                std::to_string(program.input_length));

  PathPredicate pred;
  pred.seed.assign(seed.begin(), seed.end());

  std::array<Value, kNumRegisters> regs{};
  std::vector<Address> returns;
  CallStackSnapshot stack;
  stack.frames.push_back({kRootCallSite, program.entry, 0});
  std::vector<std::uint32_t> occurrences(program.size(), 0);
  std::vector<std::optional<bool>> cti_cache(program.size());
  DepthCache depths;
  Address pc = program.entry;
  std::uint64_t steps = 0;

  auto as_expr = [](const Value &v) { return v.sym ? v.sym : expr::constant(v.concrete); };

  for (;;) {
    if (steps >= step_limit) {
      pred.terminated = Termination::StepLimit;
      break;
    }
    if (pc >= program.size()) {
      pred.terminated = Termination::Fault;
      break;
    }
    const Instruction &ins = program.instructions[pc];
    ++steps;

    if (is_alu(ins.op)) {
      const Value &a = regs[ins.ra];
      const Value &b = regs[ins.rb];
      Value out{alu(ins.op, a.concrete, b.concrete), nullptr};
      if (a.sym || b.sym) {
        ExprRef e = expr::arith(expr::arithmetic_for(ins.op), as_expr(a), as_expr(b));
        if (!e->is_constant() && depths.depth(e) <= kMaxSymbolicDepth)
          out.sym = std::move(e);
      }
      regs[ins.rd] = std::move(out);
      ++pc;
      continue;
    }

    if (is_conditional_jump(ins.op)) {
      const Value &a = regs[ins.ra];
      const Value &b = regs[ins.rb];
      const bool taken = branch_taken(ins.op, a.concrete, b.concrete);
      const std::uint32_t occurrence = occurrences[pc]++;
      if (a.sym || b.sym) {
        ExprRef cond = expr::compare(expr::comparison_for(ins.op), as_expr(a), as_expr(b));
        if (!taken)
          cond = expr::negate(cond);
        if (!vars(*cond).empty()) {
          BranchConstraint c;
          c.expr = std::move(cond);
          c.src = pc;
          c.dst = ins.target;
          c.taken = taken;
          c.occurrence = occurrence;
          c.stack = stack;
          if (!cti_cache[pc])
            cti_cache[pc] = ins.target > pc && scan_cti(program, pc, ins.target);
          c.has_cti = *cti_cache[pc];
          c.seq = pred.constraints.size();
          pred.constraints.push_back(std::move(c));
        }
      }
      pc = taken ? ins.target : pc + 1;
      continue;
    }

    bool stop = false;
    switch (ins.op) {
    case Opcode::Input:
      regs[ins.rd] = {seed[ins.imm], expr::input_byte(ins.imm)};
      ++pc;
      break;
    case Opcode::Const:
      regs[ins.rd] = {ins.imm, nullptr};
      ++pc;
      break;
    case Opcode::Mov:
      regs[ins.rd] = regs[ins.ra];
      ++pc;
      break;
    case Opcode::Jmp:
      pc = ins.target;
      break;
    case Opcode::Call:
      returns.push_back(pc + 1);
      stack.frames.push_back(
          {pc, ins.target, static_cast<std::uint32_t>(stack.frames.size())});
      pc = ins.target;
      break;
    case Opcode::Ret:
      if (returns.empty()) {
        pred.terminated = Termination::Fault;
        stop = true;
        break;
      }
      pc = returns.back();
      returns.pop_back();
      // Drop every frame deeper than the one we return into.
      stack.frames.resize(returns.size() + 1);
      break;
    case Opcode::Halt:
      pred.terminated = Termination::Halt;
      stop = true;
      break;
    default:
      break;
    }
    if (stop)
      break;
  }
  return pred;
}

std::string format_stack(const CallStackSnapshot &stack) {
  std::string out = "[";
  for (std::size_t i = 0; i < stack.frames.size(); ++i) {
    if (i)
      out += ',';
    const Address site = stack.frames[i].call_site;
    out += site == kRootCallSite ? std::string("-") : std::to_string(site);
  }
  return out + "]";
}

std::string dump_trace(const PathPredicate &predicate) {
  std::ostringstream out;
  for (const BranchConstraint &c : predicate.constraints)
    out << c.seq << "; " << c.src << "; " << c.dst << "; " << (c.taken ? 1 : 0) << "; "
        << (c.has_cti ? 1 : 0) << "; stack=" << format_stack(c.stack)
        << "; expr=" << to_prefix(*c.expr) << '\n';
  return out.str();
}

} // namespace sopt
