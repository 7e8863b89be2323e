#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace upm {

class TextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Token semantics. The numeric values are the virtual field numbers.
enum class Semantics : std::uint8_t {
  attribute = 1,          // number + unit, e.g. "32gb"
  model_first_mixed = 2,  // first mixed token that is not an attribute
  model_other_mixed = 3,  // remaining mixed tokens
  model_numeric = 4,      // number not followed by a unit
  normal = 5,
};

inline constexpr std::size_t kFieldCount = 5;

constexpr std::size_t field_index(Semantics s) {
  return static_cast<std::size_t>(s) - 1;
}

std::string_view to_string(Semantics s);

struct AnalyzedToken {
  std::string surface;
  Semantics semantics = Semantics::normal;
  std::uint32_t position = 0;

  friend bool operator==(const AnalyzedToken&, const AnalyzedToken&) = default;
};

// Distinct tokens of one title, in title order, positions 0..length-1.
struct AnalyzedTitle {
  std::vector<AnalyzedToken> tokens;

  std::size_t length() const { return tokens.size(); }
  std::vector<std::string> surfaces() const;

  friend bool operator==(const AnalyzedTitle&, const AnalyzedTitle&) = default;
};

class UnitLexicon {
 public:
  UnitLexicon() = default;

  // The lexicon shipped in data/units.txt.
  static UnitLexicon builtin();
  static UnitLexicon from_file(const std::filesystem::path& path);
  // One unit per line; blank lines and '#' comments are ignored. Entries are
  // case-folded.
  static UnitLexicon from_text(std::string_view text);

  bool contains(std::string_view unit) const { return units_.contains(unit); }
  std::size_t size() const { return units_.size(); }
  const std::set<std::string, std::less<>>& units() const { return units_; }

 private:
  std::set<std::string, std::less<>> units_;
};

// Character-class helpers shared with the tests.
bool is_numeric_token(std::string_view token);
bool is_mixed_token(std::string_view token);

// Case folding, punctuation removal, hyphen/slash splitting and duplicate
// removal. Parts of a hyphen- or slash-delimited compound are appended after
// all original tokens. Throws TextError when nothing survives.
std::vector<std::string> normalize_title(std::string_view raw);

// Assigns semantics; a numeric token immediately followed by a unit token is
// merged with it into one attribute token.
AnalyzedTitle classify_tokens(std::span<const std::string> tokens,
                              const UnitLexicon& units);

AnalyzedTitle analyze_title(std::string_view raw, const UnitLexicon& units);

enum class Variant { upm, upm_plus };

// upm+ keeps the first 2 * k_star tokens; upm returns the title unchanged.
AnalyzedTitle truncate_for_variant(AnalyzedTitle title, Variant variant, int k_star);

std::string_view to_string(Variant v);

}  // namespace upm
