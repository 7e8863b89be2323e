#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "upm/types.hpp"

namespace upm {

using ProductPair = std::pair<ProductId, ProductId>;

// A set of unordered product pairs. Every pair is stored as (min, max),
// sorted and unique; self-pairs are dropped.
class MatchSet {
 public:
  MatchSet() = default;
  explicit MatchSet(std::vector<ProductPair> pairs);

  static ProductPair normalize(ProductId a, ProductId b) {
    return a < b ? ProductPair{a, b} : ProductPair{b, a};
  }

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(ProductId a, ProductId b) const;
  std::size_t intersection_size(const MatchSet& other) const;

  const std::vector<ProductPair>& pairs() const { return pairs_; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  friend bool operator==(const MatchSet&, const MatchSet&) = default;

 private:
  std::vector<ProductPair> pairs_;
};

}  // namespace upm
