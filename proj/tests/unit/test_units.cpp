#include <fstream>
#include <sstream>

#include "doctest.h"
#include "upm/textprep.hpp"

using namespace upm;

TEST_SUITE("units") {
  TEST_CASE("shipped file equals the built-in lexicon") {
    const auto path = std::string(UPM_SOURCE_DIR) + "/data/units.txt";
    CHECK(UnitLexicon::from_file(path).units() == UnitLexicon::builtin().units());
    CHECK_THROWS_AS(UnitLexicon::from_file(path + ".missing"), TextError);
  }

  TEST_CASE("declared families are complete") {
    std::ifstream in(std::string(UPM_SOURCE_DIR) + "/data/units.txt");
    REQUIRE(in);
    const auto lex = UnitLexicon::builtin();
    std::string line;
    int families = 0;
    while (std::getline(in, line)) {
      const std::string tag = "# family:";
      if (line.rfind(tag, 0) != 0) continue;
      std::istringstream fields(line.substr(tag.size()));
      std::string base;
      fields >> base;
      ++families;
      CHECK_MESSAGE(lex.contains(base), base);
      for (std::string prefix; fields >> prefix;) {
        CHECK_MESSAGE(lex.contains(prefix + base), std::string(prefix + base));
      }
    }
    CHECK(families > 5);
  }

  TEST_CASE("common units") {
    const auto lex = UnitLexicon::builtin();
    for (const char* u : {"gb", "mb", "tb", "ghz", "mhz", "w", "kg", "l", "rpm", "inch", "mah"}) {
      CHECK_MESSAGE(lex.contains(u), u);
    }
    CHECK_FALSE(lex.contains("core"));
    CHECK_FALSE(lex.contains("GB"));
  }
}
