#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace sopt;
using namespace sopt::testing;
using namespace sopt::expr;

namespace {

InversionQuery make_query(std::vector<ExprRef> conjuncts) {
  InversionQuery q;
  q.kind = QueryKind::Optimistic;
  q.conjuncts = std::move(conjuncts);
  for (std::size_t i = 0; i + 1 < q.conjuncts.size(); ++i)
    q.included.push_back(i);
  q.target_seq = q.conjuncts.size() - 1;
  return q;
}

ExprRef eq(ExprRef a, ExprRef b) { return compare(ExprKind::Eq, std::move(a), std::move(b)); }

std::string write_script(const std::string &name, const std::string &body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << "#!/bin/sh\n" << body;
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return path.string();
}

} // namespace

TEST_CASE("listing1 verdicts and models") {
  const Program p = load_corpus_program("listing1");
  const PathPredicate pred = run_concolic(p, load_corpus_seed("listing1"));
  const InversionQuery sliced = slice(pred, 3);
  const InversionQuery opt = build_optimistic(pred, 3);
  const InversionQuery strong = build_strong_optimistic(pred, sliced, 3);
  for (Kernel k : {Kernel::Serial, Kernel::Parallel}) {
    CHECK(checked_solve(sliced, pred.seed, {}, k).status == SolveStatus::Unsat);
    const Verdict vo = checked_solve(opt, pred.seed, {}, k);
    REQUIRE(vo.status == SolveStatus::Sat);
    CHECK(*vo.model == Model{{0, 0x35}, {3, 0x36}});
    CHECK(merge_model(*vo.model, pred.seed) == Bytes{0x35, 0x11, 0x20, 0x36});
    const Verdict vs = checked_solve(strong, pred.seed, {}, k);
    REQUIRE(vs.status == SolveStatus::Sat);
    CHECK(*vs.model == Model{{0, 0x35}, {1, 0x37}, {3, 0x36}});
  }
}

TEST_CASE("enumeration starts at the seed and counts upwards") {
  const ExprRef b0 = input_byte(0), b1 = input_byte(1);
  auto model_of = [](std::vector<ExprRef> c, Bytes seed) {
    const Verdict v = checked_solve(make_query(std::move(c)), seed, {}, Kernel::Serial);
    REQUIRE(v.status == SolveStatus::Sat);
    return *v.model;
  };
  // The seed itself wins when it already satisfies the query.
  CHECK(model_of({compare(ExprKind::Ugt, b0, constant(0x40))}, {0x50}) == Model{{0, 0x50}});
  CHECK(model_of({compare(ExprKind::Ugt, b0, constant(0x40))}, {0x10}) == Model{{0, 0x41}});
  // Wraparound.
  CHECK(model_of({compare(ExprKind::Ult, b0, constant(5))}, {0xfe}) == Model{{0, 0x00}});
  // Lowest byte index is the most significant digit: byte 0 keeps its seed
  // value while byte 1 is searched.
  CHECK(model_of({compare(ExprKind::Ugt, arith(ExprKind::Add, b0, b1), constant(0x80))},
                 {0x30, 0x40}) == Model{{0, 0x30}, {1, 0x51}});
  // Bytes outside the query keep their seed values in the merged input.
  CHECK(merge_model(Model{{1, 9}}, Bytes{1, 2, 3}) == Bytes{1, 9, 3});
  CHECK_THROWS(merge_model(Model{{5, 9}}, Bytes{1, 2, 3}));
}

TEST_CASE("constant queries") {
  const Bytes seed{1};
  CHECK(solve_conjuncts(std::vector<ExprRef>{boolean(true)}, seed).status == SolveStatus::Sat);
  CHECK(solve_conjuncts(std::vector<ExprRef>{boolean(false)}, seed).status == SolveStatus::Unsat);
}

TEST_CASE("width limit and timeout") {
  const ExprRef b0 = input_byte(0), b1 = input_byte(1), b2 = input_byte(2), b3 = input_byte(3);
  const Bytes seed{1, 2, 3, 4};
  const std::vector<ExprRef> wide{eq(arith(ExprKind::Add, arith(ExprKind::Add, b0, b1),
                                           arith(ExprKind::Add, b2, b3)),
                                     constant(10))};
  CHECK_THROWS_AS(solve_conjuncts(wide, seed), QueryTooWide);
  try {
    solve_conjuncts(wide, seed);
  } catch (const QueryTooWide &e) {
    CHECK(e.width() == 4);
  }
  SolverBudget four;
  four.max_bytes = 4;
  CHECK(solve_conjuncts(wide, seed, four).status == SolveStatus::Sat);

  const std::vector<ExprRef> unsat{
      eq(arith(ExprKind::Add, arith(ExprKind::Mul, b0, b1), b2), constant(0x12345))};
  SolverBudget none;
  none.time_limit = std::chrono::milliseconds(0);
  for (Kernel k : {Kernel::Serial, Kernel::Parallel}) {
    const Verdict v = solve_conjuncts(unsat, seed, none, k);
    CHECK(v.status == SolveStatus::Timeout);
    CHECK_FALSE(v.model);
    CHECK(v.stats.candidates_tried < (std::uint64_t{1} << 24));
  }
  const Verdict full = solve_conjuncts(unsat, seed, {}, Kernel::Parallel);
  CHECK(full.status == SolveStatus::Unsat);
  CHECK(full.stats.candidates_tried == (std::uint64_t{1} << 24));
}

TEST_CASE("query bytes beyond the seed are rejected") {
  CHECK_THROWS_AS(solve_conjuncts(std::vector<ExprRef>{eq(input_byte(2), constant(1))}, Bytes{0}),
                  std::invalid_argument);
}

TEST_CASE("random programs: kernels agree with each other and with full enumeration") {
  std::mt19937 rng(31337);
  std::size_t sat = 0, unsat = 0;
  for (int i = 0; i < 25; ++i) {
    const RandomCase c = random_symbolic_case(rng, 2);
    CAPTURE(c.source);
    const PathPredicate pred = run_concolic(c.program, c.seed);
    EnumerationOracle oracle(c.seed.size());
    std::vector<std::pair<InversionQuery, std::size_t>> queries;
    for (std::size_t t = 0; t < pred.size(); ++t) {
      InversionQuery s = slice(pred, t);
      InversionQuery o = build_optimistic(pred, t);
      InversionQuery so = build_strong_optimistic(pred, s, t);
      for (InversionQuery *q : {&s, &o, &so}) {
        const std::size_t h = oracle.add(q->conjuncts);
        queries.emplace_back(std::move(*q), h);
      }
    }
    const std::vector<bool> expected = oracle.run();
    for (const auto &[q, h] : queries) {
      CAPTURE(dump_query(q));
      const Verdict serial = checked_solve(q, pred.seed, {}, Kernel::Serial);
      const Verdict parallel = checked_solve(q, pred.seed, {}, Kernel::Parallel);
      CHECK(serial.status == parallel.status);
      CHECK(serial.model == parallel.model);
      CHECK(serial.stats.candidates_tried == parallel.stats.candidates_tried);
      CHECK((serial.status == SolveStatus::Sat) == expected[h]);
      (expected[h] ? sat : unsat)++;
    }
  }
  CHECK(sat > 0);
  CHECK(unsat > 0);
}

TEST_CASE("SMT export matches the stored listing1 script") {
  const Program p = load_corpus_program("listing1");
  const PathPredicate pred = run_concolic(p, load_corpus_seed("listing1"));
  const std::string text = export_smt(build_optimistic(pred, 3));
  CHECK(text == read_file(fixture_path("listing1_optimistic.smt2")));
  CHECK(text == export_smt(build_optimistic(pred, 3)));

  const std::string sliced = export_smt(slice(pred, 3));
  std::size_t asserts = 0;
  for (std::size_t pos = 0; (pos = sliced.find("(assert ", pos)) != std::string::npos; ++pos)
    ++asserts;
  CHECK(asserts == 3);
  CHECK(sliced.find("(declare-const k!1 (_ BitVec 8))") != std::string::npos);
  CHECK(sliced.find("k!2") == std::string::npos);
}

TEST_CASE("external solver output parsing") {
  Verdict v = ExternalSolver::parse_output(
      "sat\n(model\n  (define-fun k!0 () (_ BitVec 8) #x35)\n"
      "  (define-fun k!3 () (_ BitVec 8) (_ bv54 8))\n  (define-fun k!1 () (_ BitVec 8) #b00110111)\n)\n");
  CHECK(v.status == SolveStatus::Sat);
  REQUIRE(v.model);
  CHECK(*v.model == Model{{0, 0x35}, {1, 0x37}, {3, 0x36}});
  CHECK(ExternalSolver::parse_output("unsat\n").status == SolveStatus::Unsat);
  CHECK(ExternalSolver::parse_output("\n  unsat \n").status == SolveStatus::Unsat);
  CHECK(ExternalSolver::parse_output("unknown\n").status == SolveStatus::Timeout);
  CHECK(ExternalSolver::parse_output("").status == SolveStatus::Timeout);
  CHECK(ExternalSolver::parse_output("(error \"boom\")").status == SolveStatus::Timeout);
}

TEST_CASE("external solver process boundary") {
  const Program p = load_corpus_program("listing1");
  const PathPredicate pred = run_concolic(p, load_corpus_seed("listing1"));
  const InversionQuery q = build_optimistic(pred, 3);

  const auto capture = std::filesystem::temp_directory_path() / "sopt-test-captured.smt2";
  const std::string stub = write_script(
      "sopt-test-stub.sh", "cat > '" + capture.string() +
                               "'\necho sat\necho '((define-fun k!0 () (_ BitVec 8) #x35)'\n"
                               "echo ' (define-fun k!3 () (_ BitVec 8) #x36))'\n");
  const Verdict v = ExternalSolver(stub).solve(q);
  CHECK(v.status == SolveStatus::Sat);
  REQUIRE(v.model);
  CHECK(model_valid(q.conjuncts, *v.model, pred.seed));
  CHECK(read_file(capture.string()) == export_smt(q));

  const std::string unsat = write_script("sopt-test-unsat.sh", "cat >/dev/null\necho unsat\n");
  CHECK(ExternalSolver(unsat).solve(q).status == SolveStatus::Unsat);
  std::filesystem::remove(capture);
  std::filesystem::remove(stub);
  std::filesystem::remove(unsat);
}
