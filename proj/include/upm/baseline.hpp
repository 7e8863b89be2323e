#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "upm/index.hpp"
#include "upm/match_set.hpp"
#include "upm/types.hpp"

namespace upm {

enum class Metric { cs, cs_idf, jaccard, jaccard_idf };

std::optional<Metric> parse_metric(std::string_view name);
std::string_view to_string(Metric m);

// Set similarities over ascending token id lists. The idf forms weight each
// token by idf^2. When a weighted denominator is zero the result is 1 for
// equal sets and 0 otherwise. Empty titles throw std::invalid_argument.
double cosine(std::span<const TokenId> a, std::span<const TokenId> b);
double cosine_idf(std::span<const TokenId> a, std::span<const TokenId> b,
                  std::span<const double> idf);
double jaccard(std::span<const TokenId> a, std::span<const TokenId> b);
double jaccard_idf(std::span<const TokenId> a, std::span<const TokenId> b,
                   std::span<const double> idf);

double similarity(Metric m, std::span<const TokenId> a, std::span<const TokenId> b,
                  std::span<const double> idf);

// Exhaustive all-pairs matching; no blocking.
class PairwiseMatcher {
 public:
  PairwiseMatcher(const TokenTable& tokens, std::span<const ProductId> product_ids);

  double similarity(Metric m, ProductIndex a, ProductIndex b) const;

  // Pairs whose similarity exceeds tau.
  MatchSet match(Metric m, double tau, unsigned threads = 1) const;

  // One MatchSet per threshold, each pair scored once.
  std::vector<MatchSet> sweep(Metric m, std::span<const double> taus,
                              unsigned threads = 1) const;

 private:
  template <class Sink>
  void scan(Metric m, double floor, unsigned threads, Sink&& sink) const;

  const TokenTable& tokens_;
  std::span<const ProductId> ids_;
  std::vector<double> weight_norm_;  // sum of idf^2 per title
};

// The default threshold grid 0.1, 0.2, ..., 0.9.
std::vector<double> default_sweep();

// "lo:hi:step", inclusive of hi up to rounding. Throws std::invalid_argument.
std::vector<double> parse_sweep(std::string_view spec);

}  // namespace upm
