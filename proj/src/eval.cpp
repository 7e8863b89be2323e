#include "upm/eval.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "csv.hpp"
#include "upm/ingest.hpp"

namespace upm {

MatchSet expand_cluster_pairs(const ClusterUniverse& universe,
                              std::span<const ProductId> product_ids) {
  std::vector<ProductPair> pairs;
  for (const auto& cluster : universe.clusters()) {
    const auto members = cluster.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        pairs.emplace_back(product_ids[members[i]], product_ids[members[j]]);
      }
    }
  }
  return MatchSet(std::move(pairs));
}

MatchSet expand_assignment_pairs(std::span<const ProductId> product_ids,
                                 std::span<const std::int64_t> cluster_labels) {
  if (product_ids.size() != cluster_labels.size()) {
    throw std::invalid_argument("one cluster label per product expected");
  }
  std::unordered_map<std::int64_t, std::vector<ProductId>> groups;
  for (std::size_t i = 0; i < product_ids.size(); ++i) {
    groups[cluster_labels[i]].push_back(product_ids[i]);
  }
  std::vector<ProductPair> pairs;
  for (const auto& [label, ids] : groups) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) pairs.emplace_back(ids[i], ids[j]);
    }
  }
  return MatchSet(std::move(pairs));
}

Prf1 prf1(const MatchSet& predicted, const MatchSet& truth) {
  if (truth.empty()) throw std::invalid_argument("ground truth has no matching pairs");
  Prf1 r;
  r.true_positives = predicted.intersection_size(truth);
  r.predicted = predicted.size();
  r.truth = truth.size();
  const double tp = static_cast<double>(r.true_positives);
  r.precision = r.predicted == 0 ? 0.0 : tp / static_cast<double>(r.predicted);
  r.recall = tp / static_cast<double>(r.truth);
  const double sum = r.precision + r.recall;
  r.f1 = sum == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / sum;
  return r;
}

std::map<std::size_t, std::size_t> cluster_size_histogram(const ClusterUniverse& universe) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& c : universe.clusters()) {
    if (const auto n = c.size(); n > 0) ++h[n];
  }
  return h;
}

void write_clusters(const ClusterUniverse& universe, std::span<const ProductId> product_ids,
                    std::ostream& out) {
  out << "product_id,cluster_id\n";
  for (std::size_t p = 0; p < product_ids.size(); ++p) {
    out << product_ids[p] << ',' << universe.cluster_of(static_cast<ProductIndex>(p)) << '\n';
  }
}

ClusterAssignment read_clusters(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw IngestError(path.string() + ": missing header row");
  ClusterAssignment out;
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() < 2) {
      throw IngestError(path.string() + ": row at line " + std::to_string(reader.record_line()) +
                        ": expected product_id,cluster_id");
    }
    try {
      out.product_ids.push_back(std::stoll(fields[0]));
      out.cluster_ids.push_back(std::stoll(fields[1]));
    } catch (const std::exception&) {
      throw IngestError(path.string() + ": row at line " + std::to_string(reader.record_line()) +
                        ": non-integer field");
    }
  }
  return out;
}

}  // namespace upm
