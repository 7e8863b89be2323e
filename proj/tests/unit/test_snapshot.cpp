#include <sstream>

#include "doctest.h"
#include "synthetic.hpp"
#include "upm/pipeline.hpp"
#include "upm/snapshot.hpp"

using namespace upm;

namespace {

void check_same(const Index& a, const Index& b) {
  CHECK(a.k == b.k);
  CHECK(a.variant == b.variant);
  CHECK(a.distance_mode == b.distance_mode);
  CHECK(a.product_ids == b.product_ids);
  CHECK(a.vendors == b.vendors);
  CHECK(a.tokens.lexicon.records() == b.tokens.lexicon.records());
  CHECK(a.tokens.titles == b.tokens.titles);
  CHECK(a.tokens.idf == b.tokens.idf);
  CHECK(a.combinations == b.combinations);
  CHECK(a.forward == b.forward);
  CHECK(a.stats == b.stats);
}

}  // namespace

TEST_SUITE("snapshot") {
  TEST_CASE("round trip") {
    const auto d = testing::make_catalog(testing::planted_spec());
    for (auto variant : {Variant::upm, Variant::upm_plus}) {
      for (auto mode : {DistanceMode::squared, DistanceMode::euclidean}) {
        const auto index = build_index(d, UnitLexicon::builtin(), {std::nullopt, variant, mode});
        std::stringstream buf;
        save_snapshot(index, buf);
        const auto loaded = load_snapshot(buf);
        check_same(index, loaded);

        MatchConfig cfg;
        const auto a = run_match(index, cfg);
        const auto b = run_match(loaded, cfg);
        CHECK(a.universe == b.universe);
      }
    }
  }

  TEST_CASE("empty index") {
    const auto index = build_index(Dataset{}, UnitLexicon::builtin(), {});
    std::stringstream buf;
    save_snapshot(index, buf);
    check_same(index, load_snapshot(buf));
  }

  TEST_CASE("header layout") {
    const auto index = build_index(Dataset{}, UnitLexicon::builtin(), {3, Variant::upm_plus, DistanceMode::squared});
    std::stringstream buf;
    save_snapshot(index, buf);
    const auto bytes = buf.str();
    REQUIRE(bytes.size() > 18);
    CHECK(bytes.substr(0, 8) == "UPMINDEX");
    CHECK(bytes.substr(8, 4) == std::string("\x01\x00\x00\x00", 4));
    CHECK(bytes.substr(12, 4) == std::string("\x03\x00\x00\x00", 4));
    CHECK(bytes[16] == 1);
    CHECK(bytes[17] == 0);
  }

  TEST_CASE("rejects damaged input") {
    const auto d = testing::make_catalog(testing::planted_spec());
    const auto index = build_index(d, UnitLexicon::builtin(), {});
    std::stringstream buf;
    save_snapshot(index, buf);
    const auto bytes = buf.str();

    std::istringstream wrong_magic("NOTINDEX" + bytes.substr(8));
    CHECK_THROWS_AS(load_snapshot(wrong_magic), SnapshotError);

    auto versioned = bytes;
    versioned[8] = 2;
    std::istringstream wrong_version(versioned);
    CHECK_THROWS_AS(load_snapshot(wrong_version), SnapshotError);

    for (std::size_t cut : {std::size_t{5}, std::size_t{30}, bytes.size() / 2, bytes.size() - 1}) {
      std::istringstream truncated(bytes.substr(0, cut));
      CHECK_THROWS_AS(load_snapshot(truncated), SnapshotError);
    }
  }
}
