#include "kernels.hpp"

namespace sopt::detail {

SearchResult search_serial(const SearchSpace &space) {
  SearchResult result;
  std::vector<Word> scratch(space.query.scratch_size());
  std::vector<std::uint8_t> slots(space.origin.size());

  for (std::uint64_t begin = 0; begin < space.total; begin += kBlockSize) {
    const std::uint64_t end = std::min(space.total, begin + kBlockSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      decode(i, space.origin, slots);
      if (space.query.satisfied(slots, scratch)) {
        result.index = i;
        result.tried = i + 1;
        return result;
      }
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
