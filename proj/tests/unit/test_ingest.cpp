#include <sstream>

#include "doctest.h"
#include "synthetic.hpp"
#include "upm/ingest.hpp"

using namespace upm;

namespace {

Dataset parse(const std::string& text, InputFormat fmt = InputFormat::simple) {
  std::istringstream in(text);
  return parse_products(in, fmt, "test.csv");
}

std::string error_of(const std::string& text, InputFormat fmt = InputFormat::simple) {
  try {
    parse(text, fmt);
  } catch (const IngestError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("header only") {
    const auto d = parse("id,title,vendor\n");
    CHECK(d.products.empty());
    CHECK(d.title_count() == 0);
    CHECK(d.vendor_count() == 0);
  }

  TEST_CASE("rows keep file order") {
    const auto d = parse("id,title,vendor\n7,Second Title,3\n2,First Title,1\n");
    REQUIRE(d.products.size() == 2);
    CHECK(d.products[0].product_id == 7);
    CHECK(d.products[0].title == "Second Title");
    CHECK(d.products[0].vendor_id == 3);
    CHECK(d.products[1].product_id == 2);
    CHECK_FALSE(d.products[0].truth_cluster_id.has_value());
    CHECK_FALSE(d.has_truth());
  }

  TEST_CASE("empty title names the row") {
    const auto msg = error_of("id,title,vendor\n1,ok,1\n2,  ,1\n");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("test.csv") != std::string::npos);
  }

  TEST_CASE("malformed rows") {
    CHECK_FALSE(error_of("").empty());
    CHECK_FALSE(error_of("id,title,vendor\n1,x\n").empty());
    CHECK_FALSE(error_of("id,title,vendor\nabc,x,1\n").empty());
    CHECK_FALSE(error_of("id,title,vendor\n1,x,v1\n").empty());
    CHECK(error_of("id,title,vendor\n1,x,1\n1,y,2\n").find("duplicate") != std::string::npos);
  }

  TEST_CASE("quoted fields and CRLF") {
    const auto d = parse("id,title,vendor\r\n1,\"Intel, \"\"Core\"\"\r\ni7\",4\r\n\r\n");
    REQUIRE(d.products.size() == 1);
    // Quoted content is kept verbatim, line break included.
    CHECK(d.products[0].title == "Intel, \"Core\"\r\ni7");
    CHECK(d.products[0].vendor_id == 4);
  }

  TEST_CASE("published layout carries truth") {
    const auto d = parse(
        "product_id,title,vendor_id,cluster_id,cluster_label,category_id,category_label\n"
        "1,a b,1,10,x,5,c\n2,a c,2,10,x,5,c\n3,d e,1,11,y,5,c\n",
        InputFormat::published);
    REQUIRE(d.products.size() == 3);
    CHECK(d.has_truth());
    CHECK(d.truth_cluster_count() == 2);
    CHECK(*d.products[2].truth_cluster_id == 11);
    const auto truth = load_ground_truth(d);
    CHECK(truth.size() == 1);
    CHECK(truth.contains(2, 1));
  }

  TEST_CASE("ground truth pair counts") {
    auto with_truth = [](std::vector<std::int64_t> labels) {
      Dataset d;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        d.products.push_back({ProductId(i + 1), "t", 1, labels[i]});
      }
      return load_ground_truth(d).size();
    };
    CHECK(with_truth({1, 1, 1}) == 3);
    CHECK(with_truth({1, 2, 3, 4}) == 0);
    CHECK(with_truth({1, 1, 2, 2}) == 2);
  }

  TEST_CASE("separate truth file") {
    auto d = parse("id,title,vendor\n1,a,1\n2,b,2\n3,c,3\n");
    std::istringstream truth("product_id,cluster_id\n1,5\n3,5\n2,6\n");
    attach_truth(d, truth);
    CHECK(load_ground_truth(d) == MatchSet({{1, 3}}));

    std::istringstream unknown("product_id,cluster_id\n9,5\n");
    CHECK_THROWS_AS(attach_truth(d, unknown), IngestError);
  }

  TEST_CASE("ground truth size matches all-pairs scan") {
    testing::Rng rng(5);
    for (int round = 0; round < 20; ++round) {
      Dataset d;
      const std::size_t n = rng.between(1, 1000);
      const std::size_t labels = rng.between(1, 60);
      for (std::size_t i = 0; i < n; ++i) {
        d.products.push_back({ProductId(i + 1), "t", 1, std::int64_t(rng.below(labels))});
      }
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (d.products[i].truth_cluster_id == d.products[j].truth_cluster_id) ++pairs;
        }
      }
      CHECK(load_ground_truth(d).size() == pairs);
    }
  }

  TEST_CASE("reload is deterministic") {
    const auto path = std::string(UPM_TEST_DIR) + "/fixtures/cpus20.csv";
    const auto a = load_products(path, InputFormat::published);
    const auto b = load_products(path, InputFormat::published);
    CHECK(a == b);
    CHECK(a.title_count() == 20);
    CHECK(a.vendor_count() == 8);
    CHECK(a.truth_cluster_count() == 7);
  }

  TEST_CASE("format names") {
    CHECK(parse_input_format("simple") == InputFormat::simple);
    CHECK(parse_input_format("published") == InputFormat::published);
    CHECK_FALSE(parse_input_format("tsv").has_value());
  }
}
