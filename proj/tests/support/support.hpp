// Shared test helpers: corpus access, a random program generator, and a
// brute-force satisfiability oracle that enumerates whole inputs.
#pragma once

#include "sopt/campaign.hpp"

#include <random>
#include <string>

namespace sopt::testing {

std::string corpus_path(const std::string &name);
std::string fixture_path(const std::string &name);
std::string read_file(const std::string &path);
Bytes read_binary(const std::string &path);

Program load_corpus_program(const std::string &name);
Bytes load_corpus_seed(const std::string &name);

/// Plain recursive evaluation, written independently of the library's
/// evaluator and compiled solver.
Word oracle_eval(const Expr &e, std::span<const std::uint8_t> input);

/// Full-input enumeration oracle: decides a batch of conjunct lists over all
/// 256^input_length inputs in one sweep.
class EnumerationOracle {
public:
  explicit EnumerationOracle(std::size_t input_length) : input_length_(input_length) {}

  /// Returns the handle of the registered conjunct list.
  std::size_t add(std::span<const ExprRef> conjuncts);
  /// sat()[h] is true iff some input satisfies every conjunct of list h.
  std::vector<bool> run() const;

private:
  std::size_t input_length_;
  std::vector<ExprRef> atoms_;
  std::vector<std::vector<std::size_t>> lists_;
};

struct RandomCase {
  std::string source;
  Program program;
  Bytes seed;
};

/// Random well-formed program: at most 30 instructions, 1-3 input bytes,
/// forward if-scopes with occasional far jumps and early returns, helper
/// functions, and short concrete loops.
RandomCase random_case(std::mt19937 &rng);

/// Random case whose concolic run records at least `min_constraints`.
RandomCase random_symbolic_case(std::mt19937 &rng, std::size_t min_constraints = 2);

/// True iff the merged model satisfies every conjunct.
bool model_valid(std::span<const ExprRef> conjuncts, const Model &model,
                 std::span<const std::uint8_t> seed);

/// solve() followed by a model check; throws std::logic_error when a SAT
/// model fails to satisfy the query.
Verdict checked_solve(const InversionQuery &query, std::span<const std::uint8_t> seed,
                      const SolverBudget &budget = {}, Kernel kernel = Kernel::Parallel);

/// True iff every input saved in `outcome` satisfies the issued query of
/// the same kind.
bool outcome_models_valid(const InversionOutcome &outcome);

} // namespace sopt::testing
