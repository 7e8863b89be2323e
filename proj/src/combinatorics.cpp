#include "upm/combinatorics.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <string>
#include <stdexcept>

namespace upm {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // result * (n - i) is divisible by (i + 1) at every step.
    result = result * (n - i) / (i + 1);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t count_combinations(std::uint64_t title_length, int max_k) {
  if (max_k < 2) throw std::invalid_argument("K must be at least 2");
  std::uint64_t total = 0;
  const auto top = std::min<std::uint64_t>(static_cast<std::uint64_t>(max_k), title_length);
  for (std::uint64_t k = 2; k <= top; ++k) {
    const auto term = binomial(title_length, k);
    if (total > std::numeric_limits<std::uint64_t>::max() - term) {
      throw std::overflow_error("combination count overflows 64 bits");
    }
    total += term;
  }
  return total;
}

std::vector<std::vector<std::uint32_t>> generate_combinations(std::size_t title_length,
                                                               int max_k) {
  if (max_k < 2) throw std::invalid_argument("K must be at least 2");
  if (max_k > kMaxCombinationSize) throw std::invalid_argument("K too large");
  std::vector<std::vector<std::uint32_t>> out;
  for_each_combination(title_length, max_k, [&](std::span<const std::uint32_t> pos) {
    out.emplace_back(pos.begin(), pos.end());
  });
  return out;
}

std::vector<Combination> generate_combinations(std::span<const TokenId> title, int max_k) {
  std::vector<Combination> out;
  for (auto& positions : generate_combinations(title.size(), max_k)) {
    Combination c;
    c.token_ids.reserve(positions.size());
    for (auto p : positions) c.token_ids.push_back(title[p]);
    c.title_positions = std::move(positions);
    out.push_back(std::move(c));
  }
  return out;
}

std::string canonical_key(std::span<const TokenId> ids) {
  std::vector<TokenId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0) key.push_back(' ');
    key += std::to_string(sorted[i]);
  }
  return key;
}

Signature signature(std::span<const TokenId> ids) {
  Signature s;
  s.canonical_key = canonical_key(ids);
  s.value = fnv1a64(s.canonical_key);
  return s;
}

std::uint64_t signature_value(std::span<const TokenId> sorted_ids) {
  std::uint64_t hash = kFnvOffsetBasis;
  char buf[16];
  for (std::size_t i = 0; i < sorted_ids.size(); ++i) {
    if (i > 0) hash = fnv1a64(" ", hash);
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, sorted_ids[i]);
    hash = fnv1a64(std::string_view(buf, static_cast<std::size_t>(end - buf)), hash);
  }
  return hash;
}

}  // namespace upm
