#pragma once

#include <string>
#include <utility>
#include <vector>

#include "upm/index.hpp"
#include "upm/ingest.hpp"

namespace upm::testing {

// Products 1..n with the given titles and vendors.
inline Dataset make_dataset(const std::vector<std::pair<std::string, VendorId>>& rows) {
  Dataset d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.products.push_back({ProductId(i + 1), rows[i].first, rows[i].second, std::nullopt});
  }
  return d;
}

inline Index index_of(const std::vector<std::pair<std::string, VendorId>>& rows,
                      std::optional<int> k = std::nullopt, Variant variant = Variant::upm) {
  IndexConfig config;
  config.k = k;
  config.variant = variant;
  return build_index(make_dataset(rows), UnitLexicon::builtin(), config);
}

inline std::vector<TokenId> ids_of(const Index& index, const std::vector<std::string>& surfaces) {
  std::vector<TokenId> ids;
  for (const auto& s : surfaces) ids.push_back(*index.tokens.lexicon.find(s));
  return ids;
}

}  // namespace upm::testing
