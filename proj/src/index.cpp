#include "upm/index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "upm/combinatorics.hpp"

namespace upm {

std::string_view to_string(DistanceMode mode) {
  return mode == DistanceMode::squared ? "squared" : "euclidean";
}

double distance(std::span<const std::uint32_t> title_positions, DistanceMode mode) {
  double sum = 0.0;
  for (std::size_t rank = 0; rank < title_positions.size(); ++rank) {
    const double delta = static_cast<double>(rank) - static_cast<double>(title_positions[rank]);
    sum += delta * delta;
  }
  return mode == DistanceMode::squared ? sum : std::sqrt(sum);
}

double distance(std::span<const TokenId> combination, std::span<const TokenId> title,
                DistanceMode mode) {
  std::vector<std::uint32_t> positions;
  positions.reserve(combination.size());
  for (TokenId id : combination) {
    const auto it = std::find(title.begin(), title.end(), id);
    if (it == title.end()) {
      throw std::invalid_argument("token " + std::to_string(id) + " is not in the title");
    }
    positions.push_back(static_cast<std::uint32_t>(it - title.begin()));
  }
  // Ranks inside a combination follow title order.
  std::sort(positions.begin(), positions.end());
  return distance(positions, mode);
}

TokenId TokenLexicon::intern(std::string_view surface, Semantics semantics) {
  if (const auto it = ids_.find(surface); it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(records_.size());
  records_.push_back({std::string(surface), 0, semantics});
  ids_.emplace(std::string(surface), id);
  return id;
}

std::optional<TokenId> TokenLexicon::find(std::string_view surface) const {
  if (const auto it = ids_.find(surface); it != ids_.end()) return it->second;
  return std::nullopt;
}

TokenTable build_token_table(std::span<const AnalyzedTitle> titles) {
  TokenTable table;
  table.titles.reserve(titles.size());
  for (const auto& title : titles) {
    IndexedTitle indexed;
    indexed.token_ids.reserve(title.length());
    indexed.semantics.reserve(title.length());
    for (const auto& token : title.tokens) {
      const TokenId id = table.lexicon.intern(token.surface, token.semantics);
      ++table.lexicon[id].frequency;
      indexed.token_ids.push_back(id);
      indexed.semantics.push_back(token.semantics);
    }
    indexed.sorted_ids = indexed.token_ids;
    std::sort(indexed.sorted_ids.begin(), indexed.sorted_ids.end());
    table.titles.push_back(std::move(indexed));
  }
  const double products = static_cast<double>(titles.size());
  table.idf.reserve(table.lexicon.size());
  for (const auto& rec : table.lexicon.records()) {
    table.idf.push_back(std::log(products / static_cast<double>(rec.frequency)));
  }
  return table;
}

std::vector<AnalyzedTitle> analyze_dataset(const Dataset& dataset, const UnitLexicon& units) {
  std::vector<AnalyzedTitle> out;
  out.reserve(dataset.products.size());
  for (const auto& p : dataset.products) {
    try {
      out.push_back(analyze_title(p.title, units));
    } catch (const TextError& e) {
      throw TextError("product " + std::to_string(p.product_id) + ": " + e.what());
    }
  }
  return out;
}

double average_title_length(std::span<const AnalyzedTitle> titles) {
  if (titles.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& t : titles) total += t.length();
  return static_cast<double>(total) / static_cast<double>(titles.size());
}

int resolve_k(double average_title_length) {
  return std::max(2, static_cast<int>(std::floor(average_title_length / 2.0)));
}

CombinationId CombinationLexicon::find_or_insert(std::span<const TokenId> sorted_ids,
                                                 std::uint64_t sig, bool* inserted) {
  auto [it, fresh] = heads_.try_emplace(sig, static_cast<CombinationId>(records_.size()));
  if (!fresh) {
    CombinationId id = it->second;
    CombinationId last = id;
    while (id != kNoIndex) {
      if (std::ranges::equal(members(id), sorted_ids)) {
        if (inserted) *inserted = false;
        return id;
      }
      last = id;
      id = records_[id].next_same_signature;
    }
    records_[last].next_same_signature = static_cast<CombinationId>(records_.size());
    ++collisions_;
  }
  if (records_.size() >= kNoIndex) throw std::length_error("combination lexicon is full");
  CombinationRecord rec;
  rec.signature = sig;
  rec.k = static_cast<std::uint32_t>(sorted_ids.size());
  rec.members_offset = static_cast<std::uint32_t>(members_.size());
  members_.insert(members_.end(), sorted_ids.begin(), sorted_ids.end());
  records_.push_back(rec);
  if (inserted) *inserted = true;
  return static_cast<CombinationId>(records_.size() - 1);
}

std::optional<CombinationId> CombinationLexicon::find(std::span<const TokenId> ids) const {
  std::vector<TokenId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  const auto it = heads_.find(signature_value(sorted));
  if (it == heads_.end()) return std::nullopt;
  for (CombinationId id = it->second; id != kNoIndex; id = records_[id].next_same_signature) {
    if (std::ranges::equal(members(id), sorted)) return id;
  }
  return std::nullopt;
}

std::span<const TokenId> CombinationLexicon::members(CombinationId id) const {
  const auto& rec = records_[id];
  return {members_.data() + rec.members_offset, rec.k};
}

std::string CombinationLexicon::canonical_key(CombinationId id) const {
  return upm::canonical_key(members(id));
}

void CombinationLexicon::reserve(std::size_t n) {
  records_.reserve(n);
  heads_.reserve(n);
}

std::vector<CombinationId> CombinationLexicon::retain(const std::vector<bool>& keep) {
  std::vector<CombinationId> remap(records_.size(), kNoIndex);
  std::vector<CombinationRecord> records;
  std::vector<TokenId> members;
  heads_.clear();
  collisions_ = 0;
  for (CombinationId id = 0; id < records_.size(); ++id) {
    if (id >= keep.size() || !keep[id]) continue;
    CombinationRecord rec = records_[id];
    const auto ids = this->members(id);
    rec.members_offset = static_cast<std::uint32_t>(members.size());
    rec.next_same_signature = kNoIndex;
    members.insert(members.end(), ids.begin(), ids.end());
    const auto new_id = static_cast<CombinationId>(records.size());
    auto [it, fresh] = heads_.try_emplace(rec.signature, new_id);
    if (!fresh) {
      CombinationId last = it->second;
      while (records[last].next_same_signature != kNoIndex) last = records[last].next_same_signature;
      records[last].next_same_signature = new_id;
      ++collisions_;
    }
    records.push_back(rec);
    remap[id] = new_id;
  }
  records_ = std::move(records);
  members_ = std::move(members);
  return remap;
}

Index build_index(const Dataset& dataset, const UnitLexicon& units, const IndexConfig& config) {
  const auto analyzed = analyze_dataset(dataset, units);
  return build_index(dataset, analyzed, config);
}

Index build_index(const Dataset& dataset, std::span<const AnalyzedTitle> analyzed,
                  const IndexConfig& config) {
  if (analyzed.size() != dataset.products.size()) {
    throw std::invalid_argument("analyzed titles do not match the dataset");
  }
  Index index;
  index.variant = config.variant;
  index.distance_mode = config.distance;
  index.stats.avg_title_length = average_title_length(analyzed);
  index.k = config.k ? *config.k : resolve_k(index.stats.avg_title_length);
  if (index.k < 2 || index.k > kMaxCombinationSize) {
    throw std::invalid_argument("K must be in [2, " + std::to_string(kMaxCombinationSize) +
                                "], got " + std::to_string(index.k));
  }

  std::vector<AnalyzedTitle> titles;
  titles.reserve(analyzed.size());
  for (const auto& t : analyzed) titles.push_back(truncate_for_variant(t, index.variant, index.k));
  index.stats.avg_indexed_title_length = average_title_length(titles);

  index.product_ids.reserve(dataset.products.size());
  index.vendors.reserve(dataset.products.size());
  for (const auto& p : dataset.products) {
    index.product_ids.push_back(p.product_id);
    index.vendors.push_back(p.vendor_id);
  }
  index.tokens = build_token_table(titles);

  std::uint64_t expected = 0;
  for (const auto& t : titles) expected += count_combinations(t.length(), index.k);
  index.combinations.reserve(static_cast<std::size_t>(expected / 2));

  std::uint64_t length_sum = 0;
  std::vector<TokenId> sorted;
  for (const auto& title : index.tokens.titles) {
    const auto ids = std::span<const TokenId>(title.token_ids);
    for_each_combination(ids.size(), index.k, [&](std::span<const std::uint32_t> pos) {
      sorted.clear();
      for (auto p : pos) sorted.push_back(ids[p]);
      std::sort(sorted.begin(), sorted.end());
      const CombinationId c = index.combinations.find_or_insert(sorted, signature_value(sorted));
      auto& rec = index.combinations[c];
      ++rec.frequency;
      rec.distance_acc += distance(pos, index.distance_mode);
      index.forward.append(c);
      length_sum += pos.size();
    });
    index.forward.close_product();
  }

  auto& s = index.stats;
  s.product_count = index.product_ids.size();
  s.distinct_tokens = index.tokens.lexicon.size();
  s.combination_count = index.combinations.size();
  s.combination_instances = index.forward.instance_count();
  s.avg_combination_length = s.combination_instances == 0
                                 ? 0.0
                                 : static_cast<double>(length_sum) /
                                       static_cast<double>(s.combination_instances);
  return index;
}

}  // namespace upm
