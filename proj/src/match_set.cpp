#include "upm/match_set.hpp"

#include <algorithm>

namespace upm {

MatchSet::MatchSet(std::vector<ProductPair> pairs) : pairs_(std::move(pairs)) {
  for (auto& p : pairs_) p = normalize(p.first, p.second);
  std::erase_if(pairs_, [](const ProductPair& p) { return p.first == p.second; });
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool MatchSet::contains(ProductId a, ProductId b) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), normalize(a, b));
}

std::size_t MatchSet::intersection_size(const MatchSet& other) const {
  std::size_t n = 0;
  auto a = pairs_.begin();
  auto b = other.pairs_.begin();
  while (a != pairs_.end() && b != other.pairs_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++n;
      ++a;
      ++b;
    }
  }
  return n;
}

}  // namespace upm
