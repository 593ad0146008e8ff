#include "sopt/vm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace sopt {

AsmError::AsmError(std::size_t line, std::size_t column, std::string token,
                   const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message + " '" +
                         token + "'"),
      line_(line), column_(column), token_(std::move(token)) {}

namespace {

struct Token {
  std::string text;
  std::size_t column = 0; // 1-based
};

struct PendingInstruction {
  Instruction ins;
  std::size_t line = 0;
  std::optional<Token> label_ref;
  std::optional<Token> input_index;
};

bool is_label_char(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.')
    return true;
  return !first && std::isdigit(static_cast<unsigned char>(c));
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_label_char(s.front(), true))
    return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return is_label_char(c, false); });
}

// Strips a `;` comment, ignoring semicolons inside character literals.
std::string_view strip_comment(std::string_view line) {
  bool in_char = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'')
      in_char = !in_char;
    else if (line[i] == ';' && !in_char)
      return line.substr(0, i);
  }
  return line;
}

Token trim(std::string_view text, std::size_t base_column) {
  std::size_t b = 0;
  while (b < text.size() && std::isspace(static_cast<unsigned char>(text[b])))
    ++b;
  std::size_t e = text.size();
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1])))
    --e;
  return {std::string(text.substr(b, e - b)), base_column + b};
}

class LineParser {
public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const Token &tok, const std::string &msg) const {
    throw AsmError(line_, tok.column, tok.text, msg);
  }

  std::uint8_t parse_register(const Token &tok) const {
    const std::string &s = tok.text;
    if (s.size() < 2 || (s[0] != 'r' && s[0] != 'R'))
      fail(tok, "expected register");
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
      fail(tok, "expected register");
    if (value >= kNumRegisters)
      fail(tok, "register out of range");
    return static_cast<std::uint8_t>(value);
  }

  Word parse_immediate(const Token &tok) const {
    const std::string &s = tok.text;
    if (s.size() == 3 && s.front() == '\'' && s.back() == '\'')
      return static_cast<unsigned char>(s[1]);
    std::uint64_t value = 0;
    std::from_chars_result res{};
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
      res = std::from_chars(s.data() + 2, s.data() + s.size(), value, 16);
    else
      res = std::from_chars(s.data(), s.data() + s.size(), value, 10);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail(tok, "expected immediate");
    if (value > 0xffffffffULL)
      fail(tok, "immediate out of range");
    return static_cast<Word>(value);
  }

  Token parse_label(const Token &tok) const {
    if (!is_identifier(tok.text))
      fail(tok, "expected label");
    return tok;
  }

private:
  std::string_view text_;
  std::size_t line_;
};

std::vector<Token> split_operands(std::string_view text, std::size_t base_column) {
  std::vector<Token> out;
  if (trim(text, base_column).text.empty())
    return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      out.push_back(trim(text.substr(start, i - start), base_column + start));
      start = i + 1;
    }
  }
  return out;
}

std::size_t expected_operands(Opcode op) {
  if (is_alu(op))
    return 3;
  if (is_conditional_jump(op))
    return 3;
  switch (op) {
  case Opcode::Input:
  case Opcode::Const:
  case Opcode::Mov:
    return 2;
  case Opcode::Jmp:
  case Opcode::Call:
    return 1;
  default:
    return 0;
  }
}

} // namespace

Program assemble(std::string_view source) {
  std::vector<PendingInstruction> pending;
  std::map<std::string, Address, std::less<>> labels;
  std::optional<std::size_t> input_length;
  std::size_t line_no = 0;

  std::istringstream stream{std::string(source)};
  std::string raw;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string_view line = strip_comment(raw);
    std::size_t offset = 0;
    LineParser parser(line, line_no);

    // Leading label definitions.
    for (;;) {
      Token head = trim(line.substr(offset), offset + 1);
      if (head.text.empty())
        break;
      const std::size_t word_end = head.text.find_first_of(" \t'");
      const std::size_t colon = head.text.find(':');
      if (colon == std::string::npos || colon > word_end)
        break;
      Token name{head.text.substr(0, colon), head.column};
      if (!is_identifier(name.text))
        parser.fail(name, "invalid label");
      if (labels.count(name.text))
        parser.fail(name, "duplicate label");
      labels.emplace(name.text, static_cast<Address>(pending.size()));
      offset = (head.column - 1) + colon + 1;
    }

    Token body = trim(line.substr(offset), offset + 1);
    if (body.text.empty())
      continue;

    std::size_t space = 0;
    while (space < body.text.size() &&
           !std::isspace(static_cast<unsigned char>(body.text[space])))
      ++space;
    Token head{body.text.substr(0, space), body.column};
    std::vector<Token> operands = split_operands(
        std::string_view(body.text).substr(space), body.column + space);

    if (head.text == ".input") {
      if (operands.size() != 1)
        parser.fail(head, "expected one operand for");
      if (input_length)
        parser.fail(head, "duplicate directive");
      input_length = parser.parse_immediate(operands[0]);
      continue;
    }
    if (!head.text.empty() && head.text[0] == '.')
      parser.fail(head, "unknown directive");

    std::string lowered = head.text;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    auto op = opcode_from_mnemonic(lowered);
    if (!op)
      parser.fail(head, "unknown mnemonic");
    if (operands.size() != expected_operands(*op)) {
      const Token &where = operands.size() > expected_operands(*op)
                               ? operands[expected_operands(*op)]
                               : head;
      parser.fail(where, "wrong operand count (expected " +
                             std::to_string(expected_operands(*op)) + ") at");
    }
    for (const Token &t : operands)
      if (t.text.empty())
        parser.fail(head, "empty operand after");

    PendingInstruction p;
    p.ins.op = *op;
    p.line = line_no;
    switch (*op) {
    case Opcode::Input:
      p.ins.rd = parser.parse_register(operands[0]);
      p.ins.imm = parser.parse_immediate(operands[1]);
      p.input_index = operands[1];
      break;
    case Opcode::Const:
      p.ins.rd = parser.parse_register(operands[0]);
      p.ins.imm = parser.parse_immediate(operands[1]);
      break;
    case Opcode::Mov:
      p.ins.rd = parser.parse_register(operands[0]);
      p.ins.ra = parser.parse_register(operands[1]);
      break;
    case Opcode::Jmp:
    case Opcode::Call:
      p.label_ref = parser.parse_label(operands[0]);
      break;
    case Opcode::Ret:
    case Opcode::Halt:
      break;
    default:
      if (is_alu(*op)) {
        p.ins.rd = parser.parse_register(operands[0]);
        p.ins.ra = parser.parse_register(operands[1]);
        p.ins.rb = parser.parse_register(operands[2]);
      } else {
        p.ins.ra = parser.parse_register(operands[0]);
        p.ins.rb = parser.parse_register(operands[1]);
        p.label_ref = parser.parse_label(operands[2]);
      }
      break;
    }
    pending.push_back(std::move(p));
  }

  Program program;
  program.input_length = input_length.value_or(0);
  std::set<Address> call_targets;

  for (PendingInstruction &p : pending) {
    if (p.input_index && p.ins.imm >= program.input_length)
      throw AsmError(p.line, p.input_index->column, p.input_index->text,
                     "input index out of range (input length " +
                         std::to_string(program.input_length) + ")");
    if (p.label_ref) {
      auto it = labels.find(p.label_ref->text);
      if (it == labels.end() || it->second >= pending.size())
        throw AsmError(p.line, p.label_ref->column, p.label_ref->text,
                       it == labels.end() ? "unknown label"
                                          : "label does not precede an instruction");
      p.ins.target = it->second;
      if (p.ins.op == Opcode::Call)
        call_targets.insert(it->second);
    }
    program.instructions.push_back(p.ins);
  }

  if (std::none_of(program.instructions.begin(), program.instructions.end(),
                   [](const Instruction &i) { return i.op == Opcode::Halt; }))
    throw AsmError(line_no, 1, "", "program has no halt instruction");

  if (auto it = labels.find("main"); it != labels.end())
    program.entry = it->second;
  if (program.entry >= program.size())
    throw AsmError(line_no, 1, "main", "entry label does not precede an instruction");

  // Function names: first label bound to each entry address.
  call_targets.insert(program.entry);
  for (Address entry : call_targets) {
    std::string name;
    if (entry == program.entry && labels.count("main"))
      name = "main";
    else
      for (const auto &[label, addr] : labels)
        if (addr == entry) {
          name = label;
          break;
        }
    program.functions.push_back({name.empty() ? "main" : name, entry});
  }
  return program;
}

std::string disassemble(const Program &program) {
  std::map<Address, std::string> names;
  for (const Function &f : program.functions)
    names.emplace(f.entry, f.name);
  if (!names.count(program.entry))
    names.emplace(program.entry, "main");
  for (const Instruction &ins : program.instructions)
    if (has_target(ins.op) && !names.count(ins.target))
      names.emplace(ins.target, ".L" + std::to_string(ins.target));

  std::ostringstream out;
  out << ".input " << program.input_length << '\n';
  for (Address a = 0; a < program.size(); ++a) {
    if (auto it = names.find(a); it != names.end())
      out << it->second << ":\n";
    const Instruction &ins = program.instructions[a];
    out << "    " << mnemonic(ins.op);
    auto reg = [](unsigned r) { return "r" + std::to_string(r); };
    switch (ins.op) {
    case Opcode::Input:
    case Opcode::Const:
      out << ' ' << reg(ins.rd) << ", " << ins.imm;
      break;
    case Opcode::Mov:
      out << ' ' << reg(ins.rd) << ", " << reg(ins.ra);
      break;
    case Opcode::Jmp:
    case Opcode::Call:
      out << ' ' << names.at(ins.target);
      break;
    case Opcode::Ret:
    case Opcode::Halt:
      break;
    default:
      if (is_alu(ins.op))
        out << ' ' << reg(ins.rd) << ", " << reg(ins.ra) << ", " << reg(ins.rb);
      else
        out << ' ' << reg(ins.ra) << ", " << reg(ins.rb) << ", "
            << names.at(ins.target);
      break;
    }
    out << '\n';
  }
  return out.str();
}

} // namespace sopt
