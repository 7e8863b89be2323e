#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "upm/match_set.hpp"
#include "upm/scoring.hpp"
#include "upm/types.hpp"

namespace upm {

// All intra-cluster pairs.
MatchSet expand_cluster_pairs(const ClusterUniverse& universe,
                              std::span<const ProductId> product_ids);
// Same, from an explicit product -> cluster label assignment.
MatchSet expand_assignment_pairs(std::span<const ProductId> product_ids,
                                 std::span<const std::int64_t> cluster_labels);

struct Prf1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;
};

// precision = 0 when nothing is predicted; f1 = 0 when P + R = 0.
// Throws std::invalid_argument on an empty truth set.
Prf1 prf1(const MatchSet& predicted, const MatchSet& truth);

// Cluster size -> number of clusters of that size.
std::map<std::size_t, std::size_t> cluster_size_histogram(const ClusterUniverse& universe);

// product_id,cluster_id CSV, one row per product in dataset order. Cluster
// ids are universe positions.
void write_clusters(const ClusterUniverse& universe, std::span<const ProductId> product_ids,
                    std::ostream& out);

struct ClusterAssignment {
  std::vector<ProductId> product_ids;
  std::vector<std::int64_t> cluster_ids;
};
ClusterAssignment read_clusters(const std::filesystem::path& path);

}  // namespace upm
