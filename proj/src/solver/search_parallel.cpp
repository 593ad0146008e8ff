#include "kernels.hpp"

#include <limits>

namespace sopt::detail {

// Blocks are visited in order; inside a block every thread scans a static
// chunk and the minimum satisfying index wins, so the answer is the same
// candidate the serial kernel stops at.
SearchResult search_parallel(const SearchSpace &space) {
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  SearchResult result;

  for (std::uint64_t begin = 0; begin < space.total; begin += kBlockSize) {
    const std::uint64_t end = std::min(space.total, begin + kBlockSize);
    std::uint64_t best = kNone;

#pragma omp parallel
    {
      std::vector<Word> scratch(space.query.scratch_size());
      std::vector<std::uint8_t> slots(space.origin.size());
#pragma omp for schedule(static) reduction(min : best)
      for (std::int64_t i = static_cast<std::int64_t>(begin);
           i < static_cast<std::int64_t>(end); ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        if (idx > best)
          continue;
        decode(idx, space.origin, slots);
        if (space.query.satisfied(slots, scratch))
          best = std::min(best, idx);
      }
    }

    if (best != kNone) {
      result.index = best;
      result.tried = best + 1;
      return result;
    }
    result.tried = end;
    if (end < space.total && std::chrono::steady_clock::now() >= space.deadline) {
      result.timed_out = true;
      return result;
    }
  }
  return result;
}

} // namespace sopt::detail
