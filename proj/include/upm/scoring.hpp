#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "upm/index.hpp"
#include "upm/textprep.hpp"
#include "upm/types.hpp"

namespace upm {

// Scope of the field populations X used by the field weights.
//   title:      X counts all tokens of the product title.
//   cumulative: X is reset per product and grows with every combination
//               visited, in enumeration order.
enum class FieldScope { title, cumulative };

struct ScoringConfig {
  double alpha = 1.0;
  double b = 1.0;
  FieldScope field_scope = FieldScope::title;

  // Throws std::invalid_argument on alpha <= 0 or b outside [0, 1].
  void validate() const;
};

using FieldPopulation = std::array<std::uint32_t, kFieldCount>;

FieldPopulation field_population(std::span<const Semantics> semantics);

double idf(std::uint32_t token_frequency, std::size_t product_count);
double avg_distance(const CombinationRecord& c);

// |W| / X[s]. Throws std::invalid_argument when X[s] == 0.
double field_weight(Semantics s, const FieldPopulation& x, std::size_t distinct_tokens);

// Everything the IR score needs about one combination of one title.
struct IrTerms {
  std::span<const double> idf;        // per token of the combination
  std::span<const Semantics> fields;  // per token of the combination
};

// Y_c = sum idf(w) * Q(z_{s_w}) / (1 - b + b * k / avg_combination_length).
double ir_score(const IrTerms& terms, const FieldPopulation& x, std::size_t distinct_tokens,
                double b, double avg_combination_length);

// I(c) = Y_c^2 * log(f_c) / (alpha + avg_distance).
double combination_score(double ir, std::uint32_t frequency, double avg_dist, double alpha);

// The dominating combination chosen for one product, with the values that
// decided it. `combination` is empty for titles with fewer than two tokens.
struct Selection {
  std::optional<CombinationId> combination;
  double score = 0.0;
  double ir = 0.0;
};

// Ordering used to pick a dominating combination: higher score, then longer,
// then smaller average distance, then smaller signature, then smaller id.
// When every score of the product is zero the chain is ir, k, signature, id.
struct Candidate {
  CombinationId id = kNoIndex;
  double score = 0.0;
  double ir = 0.0;
  std::uint32_t k = 0;
  double avg_dist = 0.0;
  std::uint64_t signature = 0;
};
bool better_by_score(const Candidate& a, const Candidate& b);
bool better_by_ir(const Candidate& a, const Candidate& b);

std::vector<Selection> score_products(const Index& index, const ScoringConfig& config,
                                      unsigned threads = 1);

// S1 = sum of idf over the title tokens.
double title_score(const Index& index, ProductIndex p);

struct VendorSlot {
  VendorId vendor = 0;
  std::vector<ProductIndex> products;

  friend bool operator==(const VendorSlot&, const VendorSlot&) = default;
};

struct Cluster {
  // Empty for clusters created outside selection (verification, or titles too
  // short to have combinations).
  std::optional<CombinationId> combination;
  std::uint64_t signature = 0;
  std::vector<VendorSlot> vendors;  // V_u in insertion order, with P_{u,v}
  ProductIndex representative = kNoIndex;
  double max_s1 = 0.0;

  std::size_t size() const;
  const VendorSlot* find_vendor(VendorId v) const;
  VendorSlot* find_vendor(VendorId v);
  std::vector<ProductIndex> members() const;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

class ClusterUniverse {
 public:
  explicit ClusterUniverse(std::size_t product_count = 0)
      : assignment_(product_count, kNoIndex) {}

  // Inserts product p into the cluster of combination u, creating it if
  // needed, and updates the representative when s1 beats the running maximum.
  ClusterId insert(CombinationId u, std::uint64_t signature, ProductIndex p, VendorId v,
                   double s1);
  // Appends a new cluster holding only p.
  ClusterId insert_new(ProductIndex p, VendorId v, double s1);

  // Moves p out of its cluster into `to` without touching representatives.
  void move(ProductIndex p, VendorId v, ClusterId to);
  // Moves p out of its cluster into a new cluster of its own.
  ClusterId move_to_new(ProductIndex p, VendorId v, double s1);

  // Renumbers the combination of every cluster; `old_to_new` maps old ids,
  // and every selected combination must map to a valid id.
  void remap_combinations(std::span<const CombinationId> old_to_new);

  const std::vector<Cluster>& clusters() const { return clusters_; }
  const Cluster& operator[](ClusterId id) const { return clusters_[id]; }
  std::size_t size() const { return clusters_.size(); }
  ClusterId cluster_of(ProductIndex p) const { return assignment_[p]; }
  const std::vector<ClusterId>& assignment() const { return assignment_; }
  std::optional<ClusterId> find(CombinationId u) const;

  // P_{u,v}; verification reorders it before evicting.
  VendorSlot& slot(ClusterId u, VendorId v);

  friend bool operator==(const ClusterUniverse& a, const ClusterUniverse& b) {
    return a.clusters_ == b.clusters_ && a.assignment_ == b.assignment_;
  }

 private:
  ClusterId append(std::optional<CombinationId> u, std::uint64_t signature);
  void place(ClusterId id, ProductIndex p, VendorId v);
  void detach(ProductIndex p, VendorId v);

  std::vector<Cluster> clusters_;
  std::vector<ClusterId> assignment_;
  std::unordered_map<CombinationId, ClusterId> by_combination_;
};

// Scores every product and builds the universe from the dominating
// combinations, inserting products in dataset order.
ClusterUniverse select_clusters(const Index& index, const ScoringConfig& config,
                                unsigned threads = 1);
ClusterUniverse build_universe(const Index& index, std::span<const Selection> selections);

// Drops every combination that is not a cluster, along with the combination
// forward lists, and renumbers the clusters' combinations.
void discard_unselected(Index& index, ClusterUniverse& universe);

std::string_view to_string(FieldScope scope);

}  // namespace upm
