#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "upm/index.hpp"
#include "upm/scoring.hpp"
#include "upm/types.hpp"

namespace upm {

enum class SimilarityMetric { cs, cs_idf };

std::optional<SimilarityMetric> parse_similarity_metric(std::string_view name);
std::string_view to_string(SimilarityMetric m);

struct VerifyConfig {
  double tau = 0.4;
  SimilarityMetric metric = SimilarityMetric::cs;
};

double product_similarity(const Index& index, ProductIndex a, ProductIndex b,
                          SimilarityMetric metric = SimilarityMetric::cs);

// A vendor with two or more products in one cluster.
struct Violation {
  ClusterId cluster = kNoIndex;
  VendorId vendor = 0;
  std::vector<ProductIndex> products;
};

std::vector<Violation> find_violations(const ClusterUniverse& universe);

// Token -> clusters whose representative title contains the token. A cluster
// sharing no token with a product has cosine 0 with it, so for tau >= 0 the
// lookup never misses a migration target.
class CandidateFinder {
 public:
  CandidateFinder(const Index& index, const ClusterUniverse& universe);

  void add_cluster(ClusterId id);

  // Clusters sharing a token with p and holding no product of `vendor`,
  // ascending by id.
  std::vector<ClusterId> find_candidates(ProductIndex p, VendorId vendor) const;

 private:
  const Index& index_;
  const ClusterUniverse& universe_;
  std::vector<std::vector<ClusterId>> by_token_;
  mutable std::vector<std::uint32_t> seen_;
  mutable std::uint32_t stamp_ = 0;
};

struct VerifyStats {
  std::size_t violations = 0;
  std::size_t evicted = 0;
  std::size_t migrated = 0;
  std::size_t created = 0;
  std::size_t passes = 0;
};

// Leaves at most one product per vendor in every cluster. Evicted products
// migrate to the most similar valid cluster when the similarity with its
// representative exceeds tau, otherwise they get a cluster of their own.
VerifyStats verify_universe(ClusterUniverse& universe, const Index& index,
                            const VerifyConfig& config = {});

}  // namespace upm
