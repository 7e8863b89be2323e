#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "upm/ingest.hpp"
#include "upm/textprep.hpp"
#include "upm/types.hpp"

namespace upm {

enum class DistanceMode { squared, euclidean };

std::string_view to_string(DistanceMode mode);

// Positional distance of a combination from the start of a title.
// `title_positions` are the positions of the combination's tokens in the
// title, ascending; a token's position inside the combination is its rank.
double distance(std::span<const std::uint32_t> title_positions,
                DistanceMode mode = DistanceMode::squared);

// Checked form: the combination's tokens in any order, looked up in `title`.
// Throws std::invalid_argument if a token is absent.
double distance(std::span<const TokenId> combination, std::span<const TokenId> title,
                DistanceMode mode = DistanceMode::squared);

struct TokenRecord {
  std::string surface;
  std::uint32_t frequency = 0;  // products whose title contains the token
  Semantics semantics = Semantics::normal;  // from the first encounter

  friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

class TokenLexicon {
 public:
  // Returns the id of `surface`, inserting it with frequency 0 if absent.
  TokenId intern(std::string_view surface, Semantics semantics);
  std::optional<TokenId> find(std::string_view surface) const;

  TokenRecord& operator[](TokenId id) { return records_[id]; }
  const TokenRecord& operator[](TokenId id) const { return records_[id]; }
  std::size_t size() const { return records_.size(); }
  const std::vector<TokenRecord>& records() const { return records_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<TokenRecord> records_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
};

// A title after tokenization: token ids in title order plus the per-title
// semantics of each token. `sorted_ids` is the same set ascending.
struct IndexedTitle {
  std::vector<TokenId> token_ids;
  std::vector<Semantics> semantics;
  std::vector<TokenId> sorted_ids;

  std::size_t length() const { return token_ids.size(); }
  friend bool operator==(const IndexedTitle&, const IndexedTitle&) = default;
};

struct TokenTable {
  TokenLexicon lexicon;
  std::vector<IndexedTitle> titles;  // one per product, dataset order
  std::vector<double> idf;           // log(|P| / f_w), indexed by TokenId

  std::size_t product_count() const { return titles.size(); }
};

// Tokens lexicon and forward token lists for already analyzed titles.
TokenTable build_token_table(std::span<const AnalyzedTitle> titles);

std::vector<AnalyzedTitle> analyze_dataset(const Dataset& dataset, const UnitLexicon& units);
double average_title_length(std::span<const AnalyzedTitle> titles);

// K* = floor(avg / 2), never below 2.
int resolve_k(double average_title_length);

struct CombinationRecord {
  std::uint64_t signature = 0;
  std::uint32_t frequency = 0;   // titles containing the combination
  double distance_acc = 0.0;     // sum of distance() over those titles
  std::uint32_t k = 0;
  std::uint32_t members_offset = 0;
  CombinationId next_same_signature = kNoIndex;

  friend bool operator==(const CombinationRecord&, const CombinationRecord&) = default;
};

// Combinations keyed by signature. Records sharing a signature value are
// chained and told apart by their sorted member ids.
class CombinationLexicon {
 public:
  // `sorted_ids` ascending; `sig` == signature_value(sorted_ids).
  // Inserts with frequency 0 if absent.
  CombinationId find_or_insert(std::span<const TokenId> sorted_ids, std::uint64_t sig,
                               bool* inserted = nullptr);
  std::optional<CombinationId> find(std::span<const TokenId> ids) const;

  CombinationRecord& operator[](CombinationId id) { return records_[id]; }
  const CombinationRecord& operator[](CombinationId id) const { return records_[id]; }
  std::size_t size() const { return records_.size(); }

  std::span<const TokenId> members(CombinationId id) const;
  std::string canonical_key(CombinationId id) const;

  // Records whose signature value was already taken by a different key.
  std::size_t signature_collisions() const { return collisions_; }

  void reserve(std::size_t n);

  // Keeps only the flagged records, renumbered in their original order.
  // Returns the old -> new id map (kNoIndex for dropped records).
  std::vector<CombinationId> retain(const std::vector<bool>& keep);

  friend bool operator==(const CombinationLexicon& a, const CombinationLexicon& b) {
    return a.records_ == b.records_ && a.members_ == b.members_;
  }

 private:
  std::vector<CombinationRecord> records_;
  std::vector<TokenId> members_;
  std::unordered_map<std::uint64_t, CombinationId> heads_;
  std::size_t collisions_ = 0;
};

// Per product: the combinations of its title, in enumeration order.
class ForwardIndex {
 public:
  ForwardIndex() { offsets_.push_back(0); }

  void append(CombinationId c) { refs_.push_back(c); }
  void close_product() { offsets_.push_back(refs_.size()); }

  std::span<const CombinationId> combinations(ProductIndex p) const {
    return {refs_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
  }
  std::size_t product_count() const { return offsets_.size() - 1; }
  std::size_t instance_count() const { return refs_.size(); }
  void clear() {
    offsets_.assign(1, 0);
    refs_.clear();
    refs_.shrink_to_fit();
  }

  friend bool operator==(const ForwardIndex&, const ForwardIndex&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<CombinationId> refs_;
};

struct IndexConfig {
  std::optional<int> k;  // unset: resolve_k(average title length)
  Variant variant = Variant::upm;
  DistanceMode distance = DistanceMode::squared;
};

struct IndexStats {
  std::size_t product_count = 0;
  std::size_t distinct_tokens = 0;
  std::size_t combination_count = 0;
  std::size_t combination_instances = 0;
  double avg_combination_length = 0.0;
  // Before upm+ truncation.
  double avg_title_length = 0.0;
  // After upm+ truncation; equals avg_title_length for upm.
  double avg_indexed_title_length = 0.0;

  friend bool operator==(const IndexStats&, const IndexStats&) = default;
};

struct Index {
  int k = 2;
  Variant variant = Variant::upm;
  DistanceMode distance_mode = DistanceMode::squared;

  std::vector<ProductId> product_ids;
  std::vector<VendorId> vendors;
  TokenTable tokens;
  CombinationLexicon combinations;
  ForwardIndex forward;
  IndexStats stats;

  std::size_t product_count() const { return product_ids.size(); }
};

Index build_index(const Dataset& dataset, const UnitLexicon& units,
                  const IndexConfig& config = {});

// Builds from titles that were already analyzed (and not yet truncated).
Index build_index(const Dataset& dataset, std::span<const AnalyzedTitle> analyzed,
                  const IndexConfig& config);

}  // namespace upm
