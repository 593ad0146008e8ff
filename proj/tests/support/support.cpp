#include "support.hpp"

#include <fstream>
#include <sstream>

namespace sopt::testing {

std::string corpus_path(const std::string &name) { return std::string(SOPT_CORPUS_DIR) + "/" + name; }

std::string fixture_path(const std::string &name) {
  return std::string(SOPT_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Bytes read_binary(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Program load_corpus_program(const std::string &name) {
  return assemble(read_file(corpus_path(name + ".asm")));
}

Bytes load_corpus_seed(const std::string &name) { return read_binary(corpus_path(name + ".seed")); }

Word oracle_eval(const Expr &e, std::span<const std::uint8_t> input) {
  if (e.kind() == ExprKind::InputByte)
    return input[e.value()];
  if (e.kind() == ExprKind::Const || e.kind() == ExprKind::BoolConst)
    return e.value();
  const Word a = oracle_eval(*e.lhs(), input);
  const Word b = oracle_eval(*e.rhs(), input);
  const auto sa = static_cast<std::int32_t>(a), sb = static_cast<std::int32_t>(b);
  switch (e.kind()) {
  case ExprKind::Add: return a + b;
  case ExprKind::Sub: return a - b;
  case ExprKind::Mul: return a * b;
  case ExprKind::And: return a & b;
  case ExprKind::Or: return a | b;
  case ExprKind::Xor: return a ^ b;
  case ExprKind::Shl: return b < 32 ? a << b : 0;
  case ExprKind::Shr: return b < 32 ? a >> b : 0;
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
  case ExprKind::LogicalAnd: return a != 0 && b != 0;
  case ExprKind::LogicalOr: return a != 0 || b != 0;
  default: throw std::logic_error("oracle_eval: unexpected kind");
  }
}

std::size_t EnumerationOracle::add(std::span<const ExprRef> conjuncts) {
  std::vector<std::size_t> ids;
  for (const ExprRef &c : conjuncts) {
    std::size_t id = 0;
    while (id < atoms_.size() && !structurally_equal(atoms_[id], c))
      ++id;
    if (id == atoms_.size())
      atoms_.push_back(c);
    ids.push_back(id);
  }
  lists_.push_back(std::move(ids));
  return lists_.size() - 1;
}

std::vector<bool> EnumerationOracle::run() const {
  std::vector<bool> sat(lists_.size(), false);
  std::size_t open = lists_.size();
  const std::uint64_t total = std::uint64_t{1} << (8 * input_length_);
  Bytes input(input_length_);
  std::vector<char> truth(atoms_.size());
  for (std::uint64_t n = 0; n < total && open > 0; ++n) {
    for (std::size_t i = 0; i < input_length_; ++i)
      input[i] = static_cast<std::uint8_t>(n >> (8 * i));
    for (std::size_t a = 0; a < atoms_.size(); ++a)
      truth[a] = oracle_eval(*atoms_[a], input) != 0;
    for (std::size_t l = 0; l < lists_.size(); ++l) {
      if (sat[l])
        continue;
      bool all = true;
      for (std::size_t id : lists_[l])
        all = all && truth[id];
      if (all) {
        sat[l] = true;
        --open;
      }
    }
  }
  return sat;
}

bool model_valid(std::span<const ExprRef> conjuncts, const Model &model,
                 std::span<const std::uint8_t> seed) {
  const Bytes input = merge_model(model, seed);
  for (const ExprRef &c : conjuncts)
    if (oracle_eval(*c, input) == 0)
      return false;
  return true;
}

Verdict checked_solve(const InversionQuery &query, std::span<const std::uint8_t> seed,
                      const SolverBudget &budget, Kernel kernel) {
  Verdict v = solve(query, seed, budget, kernel);
  if (v.status == SolveStatus::Sat && (!v.model || !model_valid(query.conjuncts, *v.model, seed)))
    throw std::logic_error("invalid model for " + dump_query(query));
  return v;
}

bool outcome_models_valid(const InversionOutcome &outcome) {
  for (const GeneratedInput &g : outcome.inputs) {
    const InversionQuery *source = nullptr;
    for (const InversionQuery &q : outcome.issued)
      if (q.kind == g.kind)
        source = &q;
    if (!source)
      return false;
    for (const ExprRef &c : source->conjuncts)
      if (oracle_eval(*c, g.bytes) == 0)
        return false;
  }
  return true;
}

namespace {

class Generator {
public:
  Generator(std::mt19937 &rng, std::size_t input_length, const Bytes &seed)
      : rng_(rng), input_length_(input_length), seed_(seed) {}

  std::string build() {
    functions_ = pick(0, 2);
    std::vector<std::string> out;
    out.push_back(".input " + std::to_string(input_length_));
    out.push_back("main:");
    for (std::size_t i = 0; i < input_length_; ++i)
      out.push_back("  input r" + std::to_string(i) + ", " + std::to_string(i));
    const int stmts = pick(2, 5);
    for (int i = 0; i < stmts; ++i)
      statement(out, 0, -1, "main_end", true);
    out.push_back("main_end:");
    out.push_back("  halt");
    for (int f = 0; f < functions_; ++f) {
      const std::string end = "f" + std::to_string(f) + "_end";
      out.push_back("f" + std::to_string(f) + ":");
      const int n = pick(1, 3);
      for (int i = 0; i < n; ++i)
        statement(out, 0, f, end, false);
      out.push_back(end + ":");
      out.push_back("  ret");
    }
    std::string text;
    for (const std::string &l : out)
      text += l + "\n";
    return text;
  }

private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string reg(int lo, int hi) { return "r" + std::to_string(pick(lo, hi)); }

  Word constant() {
    switch (pick(0, 3)) {
    case 0: return static_cast<Word>(pick(0, 2));
    case 1: return seed_[pick(0, static_cast<int>(input_length_) - 1)];
    case 2: return static_cast<Word>(seed_[pick(0, static_cast<int>(input_length_) - 1)] + pick(-2, 2)) & 0xff;
    default: return static_cast<Word>(pick(0, 255));
    }
  }

  void statement(std::vector<std::string> &out, int depth, int function,
                 const std::string &exit_label, bool allow_loop) {
    static constexpr const char *kAlu[] = {"add", "sub", "mul", "and", "or", "xor", "shl", "shr"};
    static constexpr const char *kJcc[] = {"jeq", "jne",  "jlt",  "jle",  "jgt",
                                           "jge", "jlts", "jles", "jgts", "jges"};
    const int kind = pick(0, 9);
    if (kind <= 1) {
      out.push_back("  const " + reg(6, 7) + ", " + std::to_string(constant()));
    } else if (kind <= 3) {
      out.push_back(std::string("  ") + kAlu[pick(0, 7)] + " " + reg(0, 5) + ", " + reg(0, 7) +
                    ", " + reg(0, 7));
    } else if (kind <= 7 && depth < 2) {
      const std::string skip = "L" + std::to_string(labels_++);
      out.push_back("  const " + reg(6, 7) + ", " + std::to_string(constant()));
      out.push_back(std::string("  ") + kJcc[pick(0, 9)] + " " + reg(0, 5) + ", " +
                    (pick(0, 2) ? reg(6, 7) : reg(0, 5)) + ", " + skip);
      const int n = pick(1, 2);
      for (int i = 0; i < n; ++i)
        statement(out, depth + 1, function, exit_label, false);
      if (pick(0, 4) == 0)
        out.push_back(function >= 0 && pick(0, 1) ? "  ret" : "  jmp " + exit_label);
      out.push_back(skip + ":");
    } else if (kind == 8 && function + 1 < functions_) {
      out.push_back("  call f" + std::to_string(pick(function + 1, functions_ - 1)));
    } else if (kind == 9 && allow_loop && depth == 0) {
      const std::string top = "L" + std::to_string(labels_++);
      out.push_back("  const r8, 0");
      out.push_back(top + ":");
      statement(out, depth + 1, function, exit_label, false);
      out.push_back("  const r9, 1");
      out.push_back("  add r8, r8, r9");
      out.push_back("  const r9, 2");
      out.push_back("  jlt r8, r9, " + top);
    } else {
      out.push_back(std::string("  ") + kAlu[pick(0, 7)] + " " + reg(0, 5) + ", " + reg(0, 5) +
                    ", " + reg(6, 7));
    }
  }

  std::mt19937 &rng_;
  std::size_t input_length_;
  const Bytes &seed_;
  int functions_ = 0;
  int labels_ = 0;
};

} // namespace

RandomCase random_case(std::mt19937 &rng) {
  for (;;) {
    const auto length = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 3)(rng));
    Bytes seed(length);
    for (auto &b : seed)
      b = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 255)(rng));
    Generator gen(rng, length, seed);
    std::string source = gen.build();
    Program program = assemble(source);
    if (program.size() > 30)
      continue;
    return {std::move(source), std::move(program), std::move(seed)};
  }
}

RandomCase random_symbolic_case(std::mt19937 &rng, std::size_t min_constraints) {
  for (;;) {
    RandomCase c = random_case(rng);
    if (run_concolic(c.program, c.seed).size() >= min_constraints)
      return c;
  }
}

} // namespace sopt::testing
