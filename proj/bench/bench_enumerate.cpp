// Compares the serial and OpenMP enumeration kernels on queries that force a
// full sweep of the candidate space (UNSAT), and one SAT query found late.
//
//   bench_enumerate [repetitions]

#include "sopt/solver.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace sopt;

namespace {

struct Case {
  const char *name;
  std::vector<ExprRef> conjuncts;
};

double time_ms(const Case &c, const Bytes &seed, Kernel kernel, int reps, SolveStatus &status) {
  SolverBudget budget;
  budget.time_limit = std::chrono::minutes(10);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i)
    status = solve_conjuncts(c.conjuncts, seed, budget, kernel).status;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
             .count() /
         reps;
}

} // namespace

int main(int argc, char **argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  using namespace expr;
  const Bytes seed{0x10, 0x20, 0x30};
  auto b0 = input_byte(0), b1 = input_byte(1), b2 = input_byte(2);

  std::vector<Case> cases;
  // b0*b1 + b2 == 0x12345 has no solution within byte ranges.
  cases.push_back({"unsat-3-bytes",
                   {compare(ExprKind::Eq, arith(ExprKind::Add, arith(ExprKind::Mul, b0, b1), b2),
                            constant(0x12345))}});
  // Unique solution near the end of the sweep.
  cases.push_back({"late-sat-3-bytes",
                   {compare(ExprKind::Eq, b0, constant(0x0f)), compare(ExprKind::Eq, b1, constant(0x1f)),
                    compare(ExprKind::Eq, b2, constant(0x2f))}});
  cases.push_back({"unsat-2-bytes",
                   {compare(ExprKind::Ult, arith(ExprKind::Xor, b0, b1), constant(0)) }});

  std::printf("threads=%d reps=%d\n", omp_get_max_threads(), reps);
  std::printf("%-18s %12s %12s %8s\n", "case", "serial_ms", "parallel_ms", "speedup");
  for (const Case &c : cases) {
    SolveStatus s1{}, s2{};
    const double serial = time_ms(c, seed, Kernel::Serial, reps, s1);
    const double parallel = time_ms(c, seed, Kernel::Parallel, reps, s2);
    std::printf("%-18s %12.2f %12.2f %8.2f%s\n", c.name, serial, parallel, serial / parallel,
                s1 == s2 ? "" : "  VERDICT MISMATCH");
  }
  return 0;
}
