#pragma once

#include "sopt/solver.hpp"

namespace sopt::detail {

inline constexpr std::uint64_t kBlockSize = 1u << 16;

struct SearchSpace {
  const CompiledQuery &query;
  std::span<const std::uint8_t> origin;  // seed value of each slot
  std::uint64_t total = 1;               // 256^slots
  std::chrono::steady_clock::time_point deadline;
};

struct SearchResult {
  std::optional<std::uint64_t> index;  // first satisfying candidate
  std::uint64_t tried = 0;
  bool timed_out = false;
};

/// Candidate `index` as slot values: base-256 digits, slot 0 most
/// significant, each digit added to the slot's origin modulo 256.
inline void decode(std::uint64_t index, std::span<const std::uint8_t> origin,
                   std::span<std::uint8_t> slots) {
  for (std::size_t j = slots.size(); j-- > 0;) {
    slots[j] = static_cast<std::uint8_t>(origin[j] + (index & 0xff));
    index >>= 8;
  }
}

SearchResult search_serial(const SearchSpace &space);
SearchResult search_parallel(const SearchSpace &space);

} // namespace sopt::detail
