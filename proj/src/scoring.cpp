#include "upm/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "upm/combinatorics.hpp"
#include "upm/parallel.hpp"

namespace upm {

void ScoringConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("b must be in [0, 1]");
}

std::string_view to_string(FieldScope scope) {
  return scope == FieldScope::title ? "title" : "cumulative";
}

FieldPopulation field_population(std::span<const Semantics> semantics) {
  FieldPopulation x{};
  for (auto s : semantics) ++x[field_index(s)];
  return x;
}

double idf(std::uint32_t token_frequency, std::size_t product_count) {
  return std::log(static_cast<double>(product_count) / static_cast<double>(token_frequency));
}

double avg_distance(const CombinationRecord& c) {
  return c.distance_acc / static_cast<double>(c.frequency);
}

double field_weight(Semantics s, const FieldPopulation& x, std::size_t distinct_tokens) {
  const auto population = x[field_index(s)];
  if (population == 0) {
    throw std::invalid_argument("field weight requested for empty field " +
                                std::string(to_string(s)));
  }
  return static_cast<double>(distinct_tokens) / static_cast<double>(population);
}

double ir_score(const IrTerms& terms, const FieldPopulation& x, std::size_t distinct_tokens,
                double b, double avg_combination_length) {
  const double k = static_cast<double>(terms.idf.size());
  const double norm = 1.0 - b + b * k / avg_combination_length;
  double y = 0.0;
  for (std::size_t i = 0; i < terms.idf.size(); ++i) {
    y += terms.idf[i] * field_weight(terms.fields[i], x, distinct_tokens) / norm;
  }
  return y;
}

double combination_score(double ir, std::uint32_t frequency, double avg_dist, double alpha) {
  return ir * ir * std::log(static_cast<double>(frequency)) / (alpha + avg_dist);
}

bool better_by_score(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.k != b.k) return a.k > b.k;
  if (a.avg_dist != b.avg_dist) return a.avg_dist < b.avg_dist;
  if (a.signature != b.signature) return a.signature < b.signature;
  return a.id < b.id;
}

bool better_by_ir(const Candidate& a, const Candidate& b) {
  if (a.ir != b.ir) return a.ir > b.ir;
  if (a.k != b.k) return a.k > b.k;
  if (a.signature != b.signature) return a.signature < b.signature;
  return a.id < b.id;
}

std::vector<Selection> score_products(const Index& index, const ScoringConfig& config,
                                      unsigned threads) {
  config.validate();
  const auto& tokens = index.tokens;
  const auto& lexicon = index.combinations;
  const std::size_t distinct = index.stats.distinct_tokens;
  const double avg_len = index.stats.avg_combination_length;

  std::vector<Selection> selections(index.product_count());
  parallel_chunks(index.product_count(), threads, [&](std::size_t begin, std::size_t end,
                                                      unsigned) {
    std::vector<double> idf_buf;
    std::vector<Semantics> field_buf;
    for (std::size_t p = begin; p < end; ++p) {
      const auto& title = tokens.titles[p];
      const auto refs = index.forward.combinations(static_cast<ProductIndex>(p));
      if (refs.empty()) continue;

      FieldPopulation x{};
      if (config.field_scope == FieldScope::title) x = field_population(title.semantics);

      Candidate by_score;
      Candidate by_ir;
      bool first = true;
      std::size_t j = 0;
      for_each_combination(title.length(), index.k, [&](std::span<const std::uint32_t> pos) {
        const CombinationId c = refs[j++];
        idf_buf.clear();
        field_buf.clear();
        for (auto q : pos) {
          idf_buf.push_back(tokens.idf[title.token_ids[q]]);
          field_buf.push_back(title.semantics[q]);
          if (config.field_scope == FieldScope::cumulative) ++x[field_index(title.semantics[q])];
        }
        const auto& rec = lexicon[c];
        Candidate cand;
        cand.id = c;
        cand.ir = ir_score({idf_buf, field_buf}, x, distinct, config.b, avg_len);
        cand.avg_dist = avg_distance(rec);
        cand.score = combination_score(cand.ir, rec.frequency, cand.avg_dist, config.alpha);
        cand.k = rec.k;
        cand.signature = rec.signature;
        if (first || better_by_score(cand, by_score)) by_score = cand;
        if (first || better_by_ir(cand, by_ir)) by_ir = cand;
        first = false;
      });
      const Candidate& winner = by_score.score > 0.0 ? by_score : by_ir;
      selections[p] = {winner.id, winner.score, winner.ir};
    }
  });
  return selections;
}

double title_score(const Index& index, ProductIndex p) {
  double s = 0.0;
  for (TokenId w : index.tokens.titles[p].token_ids) s += index.tokens.idf[w];
  return s;
}

std::size_t Cluster::size() const {
  std::size_t n = 0;
  for (const auto& slot : vendors) n += slot.products.size();
  return n;
}

const VendorSlot* Cluster::find_vendor(VendorId v) const {
  for (const auto& slot : vendors) {
    if (slot.vendor == v) return &slot;
  }
  return nullptr;
}

VendorSlot* Cluster::find_vendor(VendorId v) {
  for (auto& slot : vendors) {
    if (slot.vendor == v) return &slot;
  }
  return nullptr;
}

std::vector<ProductIndex> Cluster::members() const {
  std::vector<ProductIndex> out;
  for (const auto& slot : vendors) out.insert(out.end(), slot.products.begin(), slot.products.end());
  return out;
}

ClusterId ClusterUniverse::append(std::optional<CombinationId> u, std::uint64_t signature) {
  const auto id = static_cast<ClusterId>(clusters_.size());
  Cluster c;
  c.combination = u;
  c.signature = signature;
  clusters_.push_back(std::move(c));
  if (u) by_combination_.emplace(*u, id);
  return id;
}

void ClusterUniverse::place(ClusterId id, ProductIndex p, VendorId v) {
  if (p >= assignment_.size()) assignment_.resize(p + 1, kNoIndex);
  auto& cluster = clusters_[id];
  if (auto* slot = cluster.find_vendor(v)) {
    slot->products.push_back(p);
  } else {
    cluster.vendors.push_back({v, {p}});
  }
  assignment_[p] = id;
}

ClusterId ClusterUniverse::insert(CombinationId u, std::uint64_t signature, ProductIndex p,
                                  VendorId v, double s1) {
  ClusterId id;
  if (const auto it = by_combination_.find(u); it != by_combination_.end()) {
    id = it->second;
  } else {
    id = append(u, signature);
  }
  place(id, p, v);
  auto& cluster = clusters_[id];
  if (cluster.representative == kNoIndex || s1 > cluster.max_s1) {
    cluster.representative = p;
    cluster.max_s1 = s1;
  }
  return id;
}

ClusterId ClusterUniverse::insert_new(ProductIndex p, VendorId v, double s1) {
  const ClusterId id = append(std::nullopt, 0);
  place(id, p, v);
  clusters_[id].representative = p;
  clusters_[id].max_s1 = s1;
  return id;
}

void ClusterUniverse::detach(ProductIndex p, VendorId v) {
  const ClusterId from = assignment_.at(p);
  auto& cluster = clusters_.at(from);
  auto* slot = cluster.find_vendor(v);
  if (slot == nullptr) throw std::logic_error("product is not in its cluster's vendor list");
  std::erase(slot->products, p);
  if (slot->products.empty()) {
    std::erase_if(cluster.vendors, [v](const VendorSlot& s) { return s.vendor == v; });
  }
  assignment_[p] = kNoIndex;
}

void ClusterUniverse::move(ProductIndex p, VendorId v, ClusterId to) {
  detach(p, v);
  place(to, p, v);
}

ClusterId ClusterUniverse::move_to_new(ProductIndex p, VendorId v, double s1) {
  detach(p, v);
  return insert_new(p, v, s1);
}

void ClusterUniverse::remap_combinations(std::span<const CombinationId> old_to_new) {
  by_combination_.clear();
  for (ClusterId id = 0; id < clusters_.size(); ++id) {
    auto& c = clusters_[id];
    if (!c.combination) continue;
    c.combination = old_to_new[*c.combination];
    by_combination_.emplace(*c.combination, id);
  }
}

std::optional<ClusterId> ClusterUniverse::find(CombinationId u) const {
  if (const auto it = by_combination_.find(u); it != by_combination_.end()) return it->second;
  return std::nullopt;
}

VendorSlot& ClusterUniverse::slot(ClusterId u, VendorId v) {
  auto* s = clusters_.at(u).find_vendor(v);
  if (s == nullptr) throw std::out_of_range("vendor not in cluster");
  return *s;
}

ClusterUniverse build_universe(const Index& index, std::span<const Selection> selections) {
  ClusterUniverse universe(index.product_count());
  for (std::size_t i = 0; i < selections.size(); ++i) {
    const auto p = static_cast<ProductIndex>(i);
    const double s1 = title_score(index, p);
    if (const auto& c = selections[i].combination) {
      universe.insert(*c, index.combinations[*c].signature, p, index.vendors[p], s1);
    } else {
      universe.insert_new(p, index.vendors[p], s1);
    }
  }
  return universe;
}

ClusterUniverse select_clusters(const Index& index, const ScoringConfig& config,
                                unsigned threads) {
  const auto selections = score_products(index, config, threads);
  return build_universe(index, selections);
}

void discard_unselected(Index& index, ClusterUniverse& universe) {
  std::vector<bool> keep(index.combinations.size(), false);
  for (const auto& c : universe.clusters()) {
    if (c.combination) keep[*c.combination] = true;
  }
  const auto remap = index.combinations.retain(keep);
  universe.remap_combinations(remap);
  index.forward.clear();
}

}  // namespace upm
