#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "upm/eval.hpp"
#include "upm/scoring.hpp"

using namespace upm;

namespace {

// One cluster per group; product i has product id i + 1 and vendor i.
ClusterUniverse universe_of(const std::vector<std::vector<ProductIndex>>& groups, std::size_t n) {
  ClusterUniverse u(n);
  CombinationId c = 0;
  for (const auto& g : groups) {
    for (auto p : g) u.insert(c, c, p, VendorId(p), 1.0);
    ++c;
  }
  return u;
}

std::vector<ProductId> ids(std::size_t n) {
  std::vector<ProductId> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = ProductId(i + 1);
  return out;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("cluster expansion") {
    CHECK(expand_cluster_pairs(universe_of({{0, 1, 2, 3}}, 4), ids(4)).size() == 6);
    CHECK(expand_cluster_pairs(universe_of({{0}, {1}, {2}}, 3), ids(3)).empty());
    CHECK(expand_cluster_pairs(universe_of({{0, 1, 2}, {3, 4}}, 5), ids(5)).size() == 4);
    CHECK(expand_cluster_pairs(universe_of({{0, 1}}, 2), ids(2)) == MatchSet({{2, 1}}));
  }

  TEST_CASE("prf1 conventions") {
    const MatchSet truth({{1, 2}, {3, 4}});
    const auto perfect = prf1(truth, truth);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);

    const auto disjoint = prf1(MatchSet({{1, 3}}), truth);
    CHECK(disjoint.f1 == 0.0);

    const auto nothing = prf1(MatchSet{}, truth);
    CHECK(nothing.precision == 0.0);
    CHECK(nothing.f1 == 0.0);

    const auto half = prf1(MatchSet({{1, 2}, {1, 3}}), truth);
    CHECK(half.precision == 0.5);
    CHECK(half.recall == 0.5);
    CHECK(half.f1 == 0.5);

    CHECK_THROWS_AS(prf1(truth, MatchSet{}), std::invalid_argument);
  }

  TEST_CASE("match set normalization") {
    const MatchSet s({{3, 1}, {1, 3}, {2, 2}, {1, 2}});
    CHECK(s.size() == 2);
    CHECK(s.pairs().front() == ProductPair{1, 2});
    CHECK(s.contains(3, 1));
    CHECK_FALSE(s.contains(2, 2));
  }

  TEST_CASE("prf1 agrees with a confusion matrix") {
    testing::Rng rng(17);
    for (int round = 0; round < 30; ++round) {
      const std::size_t n = rng.between(2, 141);  // at most ~10^4 pairs
      std::vector<std::int64_t> pred(n), truth(n);
      const std::size_t kp = rng.between(1, n);
      const std::size_t kt = rng.between(1, n / 2 + 1);
      for (std::size_t i = 0; i < n; ++i) {
        pred[i] = std::int64_t(rng.below(kp));
        truth[i] = std::int64_t(rng.below(kt));
      }
      const auto pids = ids(n);
      const auto t = expand_assignment_pairs(pids, truth);
      if (t.empty()) continue;
      const auto got = prf1(expand_assignment_pairs(pids, pred), t);
      const auto c = oracle::confusion(pred, truth);
      CHECK(got.true_positives == c.tp);
      CHECK(got.predicted == c.tp + c.fp);
      CHECK(got.truth == c.tp + c.fn);
      const double p = c.tp + c.fp == 0 ? 0.0 : double(c.tp) / double(c.tp + c.fp);
      const double r = double(c.tp) / double(c.tp + c.fn);
      CHECK(got.precision == doctest::Approx(p));
      CHECK(got.recall == doctest::Approx(r));
      CHECK(got.f1 == doctest::Approx(p + r == 0 ? 0.0 : 2 * p * r / (p + r)));
    }
  }

  TEST_CASE("pair count equals sum of binomials") {
    const auto d = testing::make_catalog(testing::planted_spec());
    const auto index = build_index(d, UnitLexicon::builtin(), {});
    const auto u = select_clusters(index, {});
    std::size_t want = 0;
    for (const auto& c : u.clusters()) want += c.size() * (c.size() - 1) / 2;
    CHECK(expand_cluster_pairs(u, index.product_ids).size() == want);
  }

  TEST_CASE("histogram") {
    const auto h = cluster_size_histogram(universe_of({{0, 1, 2}, {3}, {4}, {5, 6}}, 7));
    CHECK(h == std::map<std::size_t, std::size_t>{{1, 2}, {2, 1}, {3, 1}});
  }

  TEST_CASE("cluster file round trip") {
    const auto u = universe_of({{0, 2}, {1}}, 3);
    std::ostringstream out;
    write_clusters(u, ids(3), out);
    CHECK(out.str() == "product_id,cluster_id\n1,0\n2,1\n3,0\n");
  }
}
