#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "upm/types.hpp"

namespace upm {

// Largest combination size supported by the enumerator's fixed buffer.
inline constexpr int kMaxCombinationSize = 32;

// Throws std::overflow_error when the result does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Number of 2..max_k combinations of a title with `title_length` tokens,
// truncated at the title length.
std::uint64_t count_combinations(std::uint64_t title_length, int max_k);

// Visits every k-combination of positions {0..n-1} for k = 2..min(max_k, n):
// k ascending, then lexicographic. Positions are passed ascending.
template <class Visitor>
void for_each_combination(std::size_t n, int max_k, Visitor&& visit) {
  std::array<std::uint32_t, kMaxCombinationSize> pos{};
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(max_k), n);
  for (std::size_t k = 2; k <= top; ++k) {
    for (std::size_t i = 0; i < k; ++i) pos[i] = static_cast<std::uint32_t>(i);
    while (true) {
      visit(std::span<const std::uint32_t>(pos.data(), k));
      // Advance to the next combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && pos[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
}

std::vector<std::vector<std::uint32_t>> generate_combinations(std::size_t title_length,
                                                               int max_k);

// A combination of a concrete title: token ids and title positions, both in
// title order.
struct Combination {
  std::vector<TokenId> token_ids;
  std::vector<std::uint32_t> title_positions;

  std::size_t k() const { return token_ids.size(); }
};

// Materializes the combinations of a title given its token ids in title order.
std::vector<Combination> generate_combinations(std::span<const TokenId> title, int max_k);

// 64-bit FNV-1a.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t hash = kFnvOffsetBasis) {
  for (char c : bytes) {
    hash ^= static_cast<std::uint8_t>(c);
    hash *= kFnvPrime;
  }
  return hash;
}

struct Signature {
  std::uint64_t value = 0;
  std::string canonical_key;  // ascending ids joined by single spaces

  friend bool operator==(const Signature&, const Signature&) = default;
};

std::string canonical_key(std::span<const TokenId> ids);
Signature signature(std::span<const TokenId> ids);

// Same value as signature(ids).value without building the key string.
// `sorted_ids` must be ascending.
std::uint64_t signature_value(std::span<const TokenId> sorted_ids);

}  // namespace upm
