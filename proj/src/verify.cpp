#include "upm/verify.hpp"

#include <algorithm>
#include <numeric>

#include "upm/baseline.hpp"

namespace upm {

std::optional<SimilarityMetric> parse_similarity_metric(std::string_view name) {
  if (name == "cs") return SimilarityMetric::cs;
  if (name == "cs-idf") return SimilarityMetric::cs_idf;
  return std::nullopt;
}

std::string_view to_string(SimilarityMetric m) {
  return m == SimilarityMetric::cs ? "cs" : "cs-idf";
}

double product_similarity(const Index& index, ProductIndex a, ProductIndex b,
                          SimilarityMetric metric) {
  const auto& ta = index.tokens.titles[a].sorted_ids;
  const auto& tb = index.tokens.titles[b].sorted_ids;
  return metric == SimilarityMetric::cs ? cosine(ta, tb) : cosine_idf(ta, tb, index.tokens.idf);
}

std::vector<Violation> find_violations(const ClusterUniverse& universe) {
  std::vector<Violation> out;
  for (ClusterId u = 0; u < universe.size(); ++u) {
    for (const auto& slot : universe[u].vendors) {
      if (slot.products.size() > 1) out.push_back({u, slot.vendor, slot.products});
    }
  }
  return out;
}

CandidateFinder::CandidateFinder(const Index& index, const ClusterUniverse& universe)
    : index_(index), universe_(universe), by_token_(index.tokens.lexicon.size()) {
  for (ClusterId u = 0; u < universe.size(); ++u) add_cluster(u);
}

void CandidateFinder::add_cluster(ClusterId id) {
  const ProductIndex rep = universe_[id].representative;
  for (TokenId w : index_.tokens.titles[rep].sorted_ids) by_token_[w].push_back(id);
}

std::vector<ClusterId> CandidateFinder::find_candidates(ProductIndex p, VendorId vendor) const {
  if (seen_.size() < universe_.size()) seen_.resize(universe_.size(), 0);
  if (++stamp_ == 0) {
    std::fill(seen_.begin(), seen_.end(), 0);
    stamp_ = 1;
  }
  std::vector<ClusterId> out;
  for (TokenId w : index_.tokens.titles[p].sorted_ids) {
    for (ClusterId u : by_token_[w]) {
      if (seen_[u] == stamp_) continue;
      seen_[u] = stamp_;
      if (universe_[u].find_vendor(vendor) == nullptr) out.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::size_t verify_pass(ClusterUniverse& universe, const Index& index, const VerifyConfig& config,
                        CandidateFinder& finder, VerifyStats& stats) {
  std::size_t violations = 0;
  // Clusters appended during the pass are visited too; they start as
  // singletons and only receive products of vendors they do not hold.
  for (ClusterId u = 0; u < universe.size(); ++u) {
    for (std::size_t vi = 0; vi < universe[u].vendors.size(); ++vi) {
      const VendorId v = universe[u].vendors[vi].vendor;
      if (universe[u].vendors[vi].products.size() < 2) continue;
      ++violations;

      const ProductIndex rep = universe[u].representative;
      auto& slot = universe.slot(u, v);
      std::vector<std::pair<double, ProductIndex>> ranked;
      ranked.reserve(slot.products.size());
      for (ProductIndex p : slot.products) {
        ranked.emplace_back(product_similarity(index, p, rep, config.metric), p);
      }
      std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if ((a.second == rep) != (b.second == rep)) return a.second == rep;
        if (a.first != b.first) return a.first > b.first;
        return index.product_ids[a.second] < index.product_ids[b.second];
      });
      slot.products.clear();
      for (const auto& r : ranked) slot.products.push_back(r.second);

      for (std::size_t i = 1; i < ranked.size(); ++i) {
        const ProductIndex p = ranked[i].second;
        ++stats.evicted;
        ClusterId target = kNoIndex;
        double best = 0.0;
        for (ClusterId cand : finder.find_candidates(p, v)) {
          const double s =
              product_similarity(index, p, universe[cand].representative, config.metric);
          if (target == kNoIndex || s > best) {
            target = cand;
            best = s;
          }
        }
        if (target != kNoIndex && best > config.tau) {
          universe.move(p, v, target);
          ++stats.migrated;
        } else {
          const ClusterId fresh = universe.move_to_new(p, v, title_score(index, p));
          finder.add_cluster(fresh);
          ++stats.created;
        }
      }
    }
  }
  return violations;
}

}  // namespace

VerifyStats verify_universe(ClusterUniverse& universe, const Index& index,
                            const VerifyConfig& config) {
  VerifyStats stats;
  CandidateFinder finder(index, universe);
  while (true) {
    const std::size_t found = verify_pass(universe, index, config, finder, stats);
    ++stats.passes;
    stats.violations += found;
    if (found == 0 || find_violations(universe).empty()) break;
  }
  return stats;
}

}  // namespace upm
