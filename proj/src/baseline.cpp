#include "upm/baseline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "upm/parallel.hpp"

namespace upm {
namespace {

void require_tokens(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("similarity of an empty title");
}

std::size_t overlap(std::span<const TokenId> a, std::span<const TokenId> b) {
  std::size_t n = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

double weighted_overlap(std::span<const TokenId> a, std::span<const TokenId> b,
                        std::span<const double> idf) {
  double s = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      s += idf[a[i]] * idf[a[i]];
      ++i;
      ++j;
    }
  }
  return s;
}

// Sums idf^2 over the union, visiting tokens in ascending id order.
double weighted_union(std::span<const TokenId> a, std::span<const TokenId> b,
                      std::span<const double> idf) {
  double s = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    TokenId w;
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      w = a[i++];
    } else if (i == a.size() || b[j] < a[i]) {
      w = b[j++];
    } else {
      w = a[i];
      ++i;
      ++j;
    }
    s += idf[w] * idf[w];
  }
  return s;
}

double weight_norm(std::span<const TokenId> a, std::span<const double> idf) {
  double s = 0.0;
  for (TokenId w : a) s += idf[w] * idf[w];
  return s;
}

bool same_set(std::span<const TokenId> a, std::span<const TokenId> b) {
  return std::ranges::equal(a, b);
}

double cosine_from(double inter, double norm_a, double norm_b, std::span<const TokenId> a,
                   std::span<const TokenId> b) {
  const double denom = std::sqrt(norm_a) * std::sqrt(norm_b);
  if (denom == 0.0) return same_set(a, b) ? 1.0 : 0.0;
  return inter / denom;
}

}  // namespace

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "cs") return Metric::cs;
  if (name == "cs-idf") return Metric::cs_idf;
  if (name == "j") return Metric::jaccard;
  if (name == "j-idf") return Metric::jaccard_idf;
  return std::nullopt;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::cs: return "cs";
    case Metric::cs_idf: return "cs-idf";
    case Metric::jaccard: return "j";
    case Metric::jaccard_idf: return "j-idf";
  }
  return "unknown";
}

double cosine(std::span<const TokenId> a, std::span<const TokenId> b) {
  require_tokens(a, b);
  const double inter = static_cast<double>(overlap(a, b));
  return inter / (std::sqrt(static_cast<double>(a.size())) *
                  std::sqrt(static_cast<double>(b.size())));
}

double cosine_idf(std::span<const TokenId> a, std::span<const TokenId> b,
                  std::span<const double> idf) {
  require_tokens(a, b);
  return cosine_from(weighted_overlap(a, b, idf), weight_norm(a, idf), weight_norm(b, idf), a, b);
}

double jaccard(std::span<const TokenId> a, std::span<const TokenId> b) {
  require_tokens(a, b);
  const auto inter = overlap(a, b);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

double jaccard_idf(std::span<const TokenId> a, std::span<const TokenId> b,
                   std::span<const double> idf) {
  require_tokens(a, b);
  const double uni = weighted_union(a, b, idf);
  if (uni == 0.0) return same_set(a, b) ? 1.0 : 0.0;
  return weighted_overlap(a, b, idf) / uni;
}

double similarity(Metric m, std::span<const TokenId> a, std::span<const TokenId> b,
                  std::span<const double> idf) {
  switch (m) {
    case Metric::cs: return cosine(a, b);
    case Metric::cs_idf: return cosine_idf(a, b, idf);
    case Metric::jaccard: return jaccard(a, b);
    case Metric::jaccard_idf: return jaccard_idf(a, b, idf);
  }
  throw std::invalid_argument("unknown metric");
}

PairwiseMatcher::PairwiseMatcher(const TokenTable& tokens, std::span<const ProductId> product_ids)
    : tokens_(tokens), ids_(product_ids) {
  if (product_ids.size() != tokens.titles.size()) {
    throw std::invalid_argument("product ids do not match the token table");
  }
  weight_norm_.reserve(tokens.titles.size());
  for (const auto& t : tokens.titles) weight_norm_.push_back(weight_norm(t.sorted_ids, tokens.idf));
}

double PairwiseMatcher::similarity(Metric m, ProductIndex a, ProductIndex b) const {
  const auto& ta = tokens_.titles[a].sorted_ids;
  const auto& tb = tokens_.titles[b].sorted_ids;
  if (m == Metric::cs_idf) {
    require_tokens(ta, tb);
    return cosine_from(weighted_overlap(ta, tb, tokens_.idf), weight_norm_[a], weight_norm_[b],
                       ta, tb);
  }
  return upm::similarity(m, ta, tb, tokens_.idf);
}

template <class Sink>
void PairwiseMatcher::scan(Metric m, double floor, unsigned threads, Sink&& sink) const {
  const std::size_t n = tokens_.titles.size();
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned chunk) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double s =
            similarity(m, static_cast<ProductIndex>(i), static_cast<ProductIndex>(j));
        if (s > floor) sink(chunk, i, j, s);
      }
    }
  });
}

MatchSet PairwiseMatcher::match(Metric m, double tau, unsigned threads) const {
  std::vector<std::vector<ProductPair>> parts(chunk_count(ids_.size(), threads));
  scan(m, tau, threads, [&](unsigned chunk, std::size_t i, std::size_t j, double) {
    parts[chunk].emplace_back(ids_[i], ids_[j]);
  });
  std::vector<ProductPair> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return MatchSet(std::move(all));
}

std::vector<MatchSet> PairwiseMatcher::sweep(Metric m, std::span<const double> taus,
                                             unsigned threads) const {
  if (taus.empty()) return {};
  struct Hit {
    ProductPair pair;
    double sim;
  };
  const double floor = *std::min_element(taus.begin(), taus.end());
  std::vector<std::vector<Hit>> parts(chunk_count(ids_.size(), threads));
  scan(m, floor, threads, [&](unsigned chunk, std::size_t i, std::size_t j, double s) {
    parts[chunk].push_back({{ids_[i], ids_[j]}, s});
  });
  std::vector<MatchSet> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    std::vector<ProductPair> pairs;
    for (const auto& part : parts) {
      for (const auto& h : part) {
        if (h.sim > tau) pairs.push_back(h.pair);
      }
    }
    out.emplace_back(std::move(pairs));
  }
  return out;
}

std::vector<double> default_sweep() {
  std::vector<double> taus;
  for (int i = 1; i <= 9; ++i) taus.push_back(i / 10.0);
  return taus;
}

std::vector<double> parse_sweep(std::string_view spec) {
  auto parse = [&](std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw std::invalid_argument("bad sweep value '" + std::string(s) + "'");
    }
    return v;
  };
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw std::invalid_argument("sweep must be lo:hi:step, got '" + std::string(spec) + "'");
  }
  const double lo = parse(spec.substr(0, c1));
  const double hi = parse(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = parse(spec.substr(c2 + 1));
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("empty sweep '" + std::string(spec) + "'");
  std::vector<double> taus;
  for (int i = 0;; ++i) {
    const double t = std::round((lo + i * step) * 1e10) / 1e10;
    if (t > hi + 1e-9) break;
    taus.push_back(t);
  }
  return taus;
}

}  // namespace upm
