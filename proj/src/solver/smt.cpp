#include "sopt/solver.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>

#include <unistd.h>

namespace sopt {

namespace {

std::string_view smt_operator(ExprKind k) {
  switch (k) {
  case ExprKind::Add: return "bvadd";
  case ExprKind::Sub: return "bvsub";
  case ExprKind::Mul: return "bvmul";
  case ExprKind::And: return "bvand";
  case ExprKind::Or: return "bvor";
  case ExprKind::Xor: return "bvxor";
  case ExprKind::Shl: return "bvshl";
  case ExprKind::Shr: return "bvlshr";
  case ExprKind::Eq: return "=";
  case ExprKind::Ne: return "distinct";
  case ExprKind::Ult: return "bvult";
  case ExprKind::Ule: return "bvule";
  case ExprKind::Ugt: return "bvugt";
  case ExprKind::Uge: return "bvuge";
  case ExprKind::Slt: return "bvslt";
  case ExprKind::Sle: return "bvsle";
  case ExprKind::Sgt: return "bvsgt";
  case ExprKind::Sge: return "bvsge";
  case ExprKind::LogicalAnd: return "and";
  case ExprKind::LogicalOr: return "or";
  default: return "?";
  }
}

void smt_term(const Expr &e, std::ostream &out) {
  char buf[16];
  switch (e.kind()) {
  case ExprKind::InputByte:
    out << "((_ zero_extend 24) k!" << e.value() << ')';
    return;
  case ExprKind::Const:
    std::snprintf(buf, sizeof buf, "#x%08x", e.value());
    out << buf;
    return;
  case ExprKind::BoolConst:
    out << (e.value() ? "true" : "false");
    return;
  default:
    out << '(' << smt_operator(e.kind()) << ' ';
    smt_term(*e.lhs(), out);
    out << ' ';
    smt_term(*e.rhs(), out);
    out << ')';
  }
}

} // namespace

std::string export_smt(const InversionQuery &query) {
  VarSet all;
  for (const ExprRef &c : query.conjuncts) {
    VarSet v = vars(*c);
    all.insert(v.begin(), v.end());
  }
  std::ostringstream out;
  out << "; " << dump_query(query) << '\n';
  out << "(set-logic QF_BV)\n";
  for (std::size_t v : all)
    out << "(declare-const k!" << v << " (_ BitVec 8))\n";
  for (const ExprRef &c : query.conjuncts) {
    out << "(assert ";
    smt_term(*c, out);
    out << ")\n";
  }
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

ExternalSolver::ExternalSolver(std::string command) : command_(std::move(command)) {}

Verdict ExternalSolver::parse_output(std::string_view output) {
  Verdict verdict;
  std::istringstream in{std::string(output)};
  std::string first;
  while (std::getline(in, first) && first.find_first_not_of(" \t\r") == std::string::npos) {
  }
  first.erase(0, first.find_first_not_of(" \t"));
  first.erase(first.find_last_not_of(" \t\r") + 1);
  if (first == "unsat") {
    verdict.status = SolveStatus::Unsat;
    return verdict;
  }
  if (first != "sat") {
    verdict.status = SolveStatus::Timeout;
    return verdict;
  }

  verdict.status = SolveStatus::Sat;
  Model model;
  const std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // Each binding runs from one `k!N` to the next; its value is the first
  // bitvector literal in that span.
  static const std::regex name(R"(k!(\d+))");
  static const std::regex literal(R"(#x([0-9a-fA-F]+)|#b([01]+)|\(_\s+bv(\d+)\s+8\))");
  std::vector<std::smatch> names(std::sregex_iterator(rest.begin(), rest.end(), name),
                                 std::sregex_iterator());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto from = names[i][0].second;
    auto to = i + 1 < names.size() ? names[i + 1][0].first : rest.end();
    std::smatch m;
    if (!std::regex_search(from, to, m, literal))
      continue;
    unsigned long value = 0;
    if (m[1].matched)
      value = std::stoul(m[1].str(), nullptr, 16);
    else if (m[2].matched)
      value = std::stoul(m[2].str(), nullptr, 2);
    else
      value = std::stoul(m[3].str());
    model[std::stoul(names[i][1].str())] = static_cast<std::uint8_t>(value);
  }
  verdict.model = std::move(model);
  return verdict;
}

Verdict ExternalSolver::solve(const InversionQuery &query) const {
  const auto start = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  static std::atomic<std::uint64_t> counter{0};
  fs::path script = fs::temp_directory_path() /
                    ("sopt-query-" + std::to_string(::getpid()) + "-" +
                     std::to_string(counter++) + ".smt2");
  {
    std::ofstream out(script);
    out << export_smt(query);
  }
  const std::string cmd = command_ + " < '" + script.string() + "'";
  std::string output;
  {
    std::unique_ptr<FILE, int (*)(FILE *)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) {
      fs::remove(script);
      throw std::runtime_error("cannot start external solver: " + command_);
    }
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe.get()))
      output.append(buf, n);
  }
  fs::remove(script);
  Verdict verdict = parse_output(output);
  verdict.stats.elapsed = std::chrono::steady_clock::now() - start;
  return verdict;
}

} // namespace sopt
