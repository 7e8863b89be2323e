#include "upm/textprep.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "upm/default_units.hpp"

namespace upm {
namespace {

enum class CharClass { space, digit, letter, separator, delimiter, punct };

struct CodePoint {
  char32_t value;
  CharClass cls;
};

// Decodes UTF-8; a malformed byte decodes to itself so no input is lost.
std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = b0;
    if (b0 >= 0xC0 && b0 < 0xE0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if (b0 >= 0xE0 && b0 < 0xF0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xF0 && b0 < 0xF8) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len == 1 || i + len <= s.size();
    for (std::size_t j = 1; ok && j < len; ++j) {
      const auto b = static_cast<unsigned char>(s[i + j]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      len = 1;
      cp = b0;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// ASCII, Latin-1 and basic Greek upper case.
char32_t fold_case(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  return cp;
}

CharClass classify_char(char32_t cp) {
  if (cp < 0x80) {
    const auto c = static_cast<char>(cp);
    if (c == ' ' || (c >= '\t' && c <= '\r')) return CharClass::space;
    if (c >= '0' && c <= '9') return CharClass::digit;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return CharClass::letter;
    if (c == '.' || c == ',') return CharClass::separator;
    if (c == '-' || c == '/') return CharClass::delimiter;
    return CharClass::punct;
  }
  if (cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200B) || cp == 0x202F || cp == 0x3000) {
    return CharClass::space;
  }
  if ((cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212 || cp == 0x2044) return CharClass::delimiter;
  if ((cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
      (cp >= 0x2016 && cp <= 0x206F) || (cp >= 0x2100 && cp <= 0x214F) ||
      (cp >= 0x2190 && cp <= 0x2BFF) || cp == 0xFEFF) {
    return CharClass::punct;
  }
  return CharClass::letter;
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Cleans one whitespace-delimited chunk and splits it on hyphens/slashes.
// Returns the token to keep in place (empty if none) and fills `parts` when
// the chunk was a compound.
std::string clean_chunk(const std::vector<CodePoint>& chunk, std::vector<std::string>& parts) {
  parts.clear();
  std::string current;
  std::string compound;
  char pending_delimiter = 0;
  auto flush = [&] {
    if (current.empty()) return;
    if (!parts.empty()) compound.push_back(pending_delimiter);
    compound += current;
    parts.push_back(std::move(current));
    current.clear();
    pending_delimiter = 0;
  };
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const auto& cp = chunk[i];
    switch (cp.cls) {
      case CharClass::digit:
      case CharClass::letter:
        append_utf8(current, fold_case(cp.value));
        break;
      case CharClass::separator:
        if (i > 0 && i + 1 < chunk.size() && chunk[i - 1].cls == CharClass::digit &&
            chunk[i + 1].cls == CharClass::digit) {
          current.push_back(static_cast<char>(cp.value));
        }
        break;
      case CharClass::delimiter:
        flush();
        if (pending_delimiter == 0) pending_delimiter = cp.value == '/' || cp.value == 0x2044 ? '/' : '-';
        break;
      case CharClass::space:
      case CharClass::punct:
        break;
    }
  }
  flush();
  if (parts.size() == 1) {
    parts.clear();
  }
  return compound;
}

}  // namespace

std::string_view to_string(Semantics s) {
  switch (s) {
    case Semantics::attribute: return "attribute";
    case Semantics::model_first_mixed: return "model_first_mixed";
    case Semantics::model_other_mixed: return "model_other_mixed";
    case Semantics::model_numeric: return "model_numeric";
    case Semantics::normal: return "normal";
  }
  return "unknown";
}

std::string_view to_string(Variant v) { return v == Variant::upm ? "upm" : "upm+"; }

std::vector<std::string> AnalyzedTitle::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

UnitLexicon UnitLexicon::builtin() { return from_text(detail::kDefaultUnits); }

UnitLexicon UnitLexicon::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TextError("cannot open unit lexicon " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_text(text.str());
}

UnitLexicon UnitLexicon::from_text(std::string_view text) {
  UnitLexicon lex;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::string unit;
    for (char c : line.substr(b, e - b + 1)) {
      unit.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
    }
    lex.units_.insert(std::move(unit));
  }
  return lex;
}

bool is_numeric_token(std::string_view token) {
  if (token.empty() || !is_ascii_digit(token.front()) || !is_ascii_digit(token.back())) {
    return false;
  }
  for (char c : token) {
    if (!is_ascii_digit(c) && c != '.' && c != ',') return false;
  }
  return true;
}

bool is_mixed_token(std::string_view token) {
  bool digit = false;
  bool letter = false;
  for (char c : token) {
    const auto u = static_cast<unsigned char>(c);
    if (is_ascii_digit(c)) {
      digit = true;
    } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || u >= 0x80) {
      letter = true;
    }
  }
  return digit && letter;
}

std::vector<std::string> normalize_title(std::string_view raw) {
  const auto cps = decode_utf8(raw);
  std::vector<std::string> tokens;
  std::vector<std::string> appended;
  std::vector<std::string> parts;
  std::vector<CodePoint> chunk;

  auto take_chunk = [&] {
    if (chunk.empty()) return;
    auto token = clean_chunk(chunk, parts);
    chunk.clear();
    if (token.empty()) return;
    tokens.push_back(std::move(token));
    for (auto& p : parts) appended.push_back(std::move(p));
  };
  for (char32_t cp : cps) {
    const auto cls = classify_char(cp);
    if (cls == CharClass::space) {
      take_chunk();
    } else {
      chunk.push_back({cp, cls});
    }
  }
  take_chunk();

  for (auto& a : appended) tokens.push_back(std::move(a));

  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& t : tokens) {
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  if (out.empty()) throw TextError("title has no tokens: '" + std::string(raw) + "'");
  return out;
}

namespace {

// A mixed token whose numeric prefix is followed by a unit, e.g. "3.2ghz".
bool ends_in_unit(std::string_view token, const UnitLexicon& units) {
  std::size_t split = 0;
  while (split < token.size() &&
         (is_ascii_digit(token[split]) || token[split] == '.' || token[split] == ',')) {
    ++split;
  }
  if (split == 0 || split == token.size()) return false;
  return is_numeric_token(token.substr(0, split)) && units.contains(token.substr(split));
}

}  // namespace

AnalyzedTitle classify_tokens(std::span<const std::string> tokens, const UnitLexicon& units) {
  AnalyzedTitle title;
  title.tokens.reserve(tokens.size());
  std::unordered_set<std::string> seen;
  bool first_mixed_taken = false;

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    std::string surface = tok;
    Semantics sem;
    if (is_numeric_token(tok) && i + 1 < tokens.size() && units.contains(tokens[i + 1])) {
      surface += tokens[i + 1];
      sem = Semantics::attribute;
      ++i;
    } else if (is_mixed_token(tok)) {
      if (ends_in_unit(tok, units)) {
        sem = Semantics::attribute;
      } else if (!first_mixed_taken) {
        sem = Semantics::model_first_mixed;
      } else {
        sem = Semantics::model_other_mixed;
      }
    } else if (is_numeric_token(tok)) {
      sem = Semantics::model_numeric;
    } else {
      sem = Semantics::normal;
    }
    if (!seen.insert(surface).second) continue;
    if (sem == Semantics::model_first_mixed) first_mixed_taken = true;
    title.tokens.push_back(
        {std::move(surface), sem, static_cast<std::uint32_t>(title.tokens.size())});
  }
  return title;
}

AnalyzedTitle analyze_title(std::string_view raw, const UnitLexicon& units) {
  const auto tokens = normalize_title(raw);
  return classify_tokens(tokens, units);
}

AnalyzedTitle truncate_for_variant(AnalyzedTitle title, Variant variant, int k_star) {
  if (k_star < 1) throw std::invalid_argument("K* must be at least 1");
  if (variant == Variant::upm_plus) {
    const auto limit = static_cast<std::size_t>(2 * k_star);
    if (title.tokens.size() > limit) title.tokens.resize(limit);
  }
  return title;
}

}  // namespace upm
