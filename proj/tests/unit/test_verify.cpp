#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "synthetic.hpp"
#include "upm/scoring.hpp"
#include "upm/verify.hpp"

using namespace upm;
using testing::index_of;

namespace {

// Puts every listed product into one cluster, in order.
ClusterUniverse one_cluster(const Index& index, const std::vector<ProductIndex>& products) {
  ClusterUniverse u(index.product_count());
  for (auto p : products) u.insert(0, 0, p, index.vendors[p], title_score(index, p));
  return u;
}

std::vector<ProductIndex> sorted_members(const ClusterUniverse& u, ClusterId c) {
  auto m = u[c].members();
  std::sort(m.begin(), m.end());
  return m;
}

void check_postconditions(const Index& index, const ClusterUniverse& before,
                          const ClusterUniverse& after) {
  CHECK(find_violations(after).empty());
  std::vector<int> seen(index.product_count(), 0);
  for (const auto& c : after.clusters()) {
    for (const auto& slot : c.vendors) {
      CHECK(slot.products.size() <= 1);
      for (auto p : slot.products) ++seen[p];
    }
  }
  for (int n : seen) CHECK(n == 1);
  REQUIRE(after.size() >= before.size());
  for (ClusterId u = 0; u < before.size(); ++u) {
    CHECK(after[u].representative == before[u].representative);
    CHECK(after[u].combination == before[u].combination);
  }
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("evicts the less similar duplicate") {
    const auto index = index_of({{"a b c d", 1}, {"a b x y", 1}, {"a b c d e f", 2}, {"z q", 3}}, 2);
    auto u = one_cluster(index, {0, 1, 2});
    REQUIRE(u[0].representative == 2);
    const auto stats = verify_universe(u, index);
    CHECK(sorted_members(u, 0) == std::vector<ProductIndex>{0, 2});
    CHECK(u.cluster_of(1) == 1);
    CHECK(u.size() == 2);
    CHECK(stats.evicted == 1);
    CHECK(stats.created == 1);
    CHECK(stats.violations == 1);
  }

  TEST_CASE("representative stays even when least similar") {
    const auto index = index_of({{"a b c d e f", 1}, {"a b c d e", 1}, {"a b c d e g", 2}}, 2);
    auto u = one_cluster(index, {1, 0, 2});
    const auto rep = u[0].representative;
    REQUIRE(index.vendors[rep] == 1);
    verify_universe(u, index);
    CHECK(u.cluster_of(rep) == 0);
    CHECK(u[0].representative == rep);
  }

  TEST_CASE("distinct vendors are left alone") {
    const auto index = index_of({{"a b", 1}, {"a c", 2}, {"a d", 3}}, 2);
    auto u = one_cluster(index, {0, 1, 2});
    const auto before = u;
    const auto stats = verify_universe(u, index);
    CHECK(u == before);
    CHECK(stats.evicted == 0);
    CHECK(stats.passes == 1);
  }

  TEST_CASE("migration threshold is strict") {
    // p1 and p2 (vendor 1) tie on similarity with the representative p0, so
    // the lower product id stays and p2 is evicted. Its only candidate is p4's
    // cluster, with cosine 1/sqrt(18).
    const auto index = index_of({{"m n o p q r", 2},
                                 {"m n o p q x", 1},
                                 {"m n o p q y", 1},
                                 {"x s", 3},
                                 {"y t u", 4}},
                                2);
    ClusterUniverse u(index.product_count());
    for (ProductIndex p : {0u, 1u, 2u}) u.insert(0, 0, p, index.vendors[p], title_score(index, p));
    u.insert(1, 1, 3, index.vendors[3], title_score(index, 3));
    u.insert(2, 2, 4, index.vendors[4], title_score(index, 4));
    REQUIRE(u[0].representative == 0);
    const double s = product_similarity(index, 2, 4);
    CHECK(s == doctest::Approx(1.0 / std::sqrt(18.0)));

    auto a = u;
    const auto migrated = verify_universe(a, index, {s - 0.01, SimilarityMetric::cs});
    CHECK(a.cluster_of(1) == 0);
    CHECK(a.cluster_of(2) == 2);
    CHECK(a[2].representative == 4);
    CHECK(migrated.migrated == 1);

    for (double tau : {s, 0.4}) {
      auto b = u;
      const auto stats = verify_universe(b, index, {tau, SimilarityMetric::cs});
      CHECK(b.cluster_of(2) == 3);
      CHECK(b[3].representative == 2);
      CHECK(stats.created == 1);
    }
  }

  TEST_CASE("candidate lookup") {
    const auto index =
        index_of({{"a b c", 1}, {"d e f", 2}, {"a b c", 3}, {"g h", 4}, {"a z", 1}}, 2);
    ClusterUniverse u(index.product_count());
    u.insert(0, 0, 0, 1, title_score(index, 0));
    u.insert(1, 1, 1, 2, title_score(index, 1));
    u.insert(2, 2, 3, 4, title_score(index, 3));
    u.insert(0, 0, 4, 1, title_score(index, 4));
    CandidateFinder finder(index, u);
    CHECK(finder.find_candidates(3, 4).empty());
    CHECK(finder.find_candidates(2, 3) == std::vector<ClusterId>{0});
    CHECK(product_similarity(index, 2, u[0].representative) == doctest::Approx(1.0));
    CHECK(finder.find_candidates(2, 1).empty());
    const auto fresh = u.insert_new(2, 3, title_score(index, 2));
    finder.add_cluster(fresh);
    CHECK(finder.find_candidates(0, 2) == std::vector<ClusterId>{0, fresh});
  }

  TEST_CASE("metric names") {
    CHECK(parse_similarity_metric("cs") == SimilarityMetric::cs);
    CHECK(parse_similarity_metric("cs-idf") == SimilarityMetric::cs_idf);
    CHECK_FALSE(parse_similarity_metric("j").has_value());
  }

  TEST_CASE("postconditions on random universes") {
    testing::Rng rng(2024);
    for (int round = 0; round < 40; ++round) {
      const auto titles = testing::random_titles(rng, rng.between(5, 120), rng.between(4, 40), 1, 7);
      const auto d = testing::dataset_from_titles(titles, rng.between(1, 6), rng.next());
      auto index = build_index(d, UnitLexicon::builtin(), {});
      auto universe = select_clusters(index, {});
      discard_unselected(index, universe);
      const auto before = universe;
      for (auto metric : {SimilarityMetric::cs, SimilarityMetric::cs_idf}) {
        const double tau = double(rng.below(10)) / 10.0;
        auto after = before;
        verify_universe(after, index, {tau, metric});
        check_postconditions(index, before, after);
        auto twice = after;
        const auto again = verify_universe(twice, index, {tau, metric});
        CHECK(twice == after);
        CHECK(again.evicted == 0);
      }
    }
  }

  TEST_CASE("postconditions on the catalog fixtures") {
    for (const auto& spec : {testing::planted_spec(), testing::twin_spec()}) {
      const auto d = testing::make_catalog(spec);
      auto index = build_index(d, UnitLexicon::builtin(), {});
      auto universe = select_clusters(index, {});
      const auto before = universe;
      verify_universe(universe, index);
      check_postconditions(index, before, universe);
    }
  }
}
