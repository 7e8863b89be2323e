#include "upm/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace upm {
namespace {

constexpr char kMagic[8] = {'U', 'P', 'M', 'I', 'N', 'D', 'E', 'X'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  template <class T>
  void uint(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf, sizeof(T));
  }
  void u8(std::uint8_t v) { uint(v); }
  void u32(std::uint32_t v) { uint(v); }
  void u64(std::uint64_t v) { uint(v); }
  void i64(std::int64_t v) { uint(static_cast<std::uint64_t>(v)); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw SnapshotError("snapshot is truncated");
  }
  template <class T>
  T uint() {
    unsigned char buf[sizeof(T)];
    bytes(buf, sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
  }
  std::uint8_t u8() { return uint<std::uint8_t>(); }
  std::uint32_t u32() { return uint<std::uint32_t>(); }
  std::uint64_t u64() { return uint<std::uint64_t>(); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }

  // Counts are bounded so a corrupt header cannot trigger a huge allocation.
  std::size_t count(std::uint64_t limit) {
    const auto n = u64();
    if (n > limit) throw SnapshotError("snapshot count out of range");
    return static_cast<std::size_t>(n);
  }

 private:
  std::istream& in_;
};

constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 32;

Semantics semantics_from(std::uint8_t v) {
  if (v < 1 || v > 5) throw SnapshotError("invalid semantics value");
  return static_cast<Semantics>(v);
}

}  // namespace

void save_snapshot(const Index& index, std::ostream& out) {
  Writer w(out);
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(index.k));
  w.u8(index.variant == Variant::upm ? 0 : 1);
  w.u8(index.distance_mode == DistanceMode::squared ? 0 : 1);

  const auto& s = index.stats;
  w.u64(s.product_count);
  w.u64(s.distinct_tokens);
  w.u64(s.combination_count);
  w.u64(s.combination_instances);
  w.f64(s.avg_combination_length);
  w.f64(s.avg_title_length);
  w.f64(s.avg_indexed_title_length);

  w.u64(index.product_count());
  for (std::size_t p = 0; p < index.product_count(); ++p) {
    w.i64(index.product_ids[p]);
    w.i64(index.vendors[p]);
  }

  const auto& lex = index.tokens.lexicon;
  w.u64(lex.size());
  for (const auto& rec : lex.records()) {
    w.u32(static_cast<std::uint32_t>(rec.surface.size()));
    w.bytes(rec.surface.data(), rec.surface.size());
    w.u32(rec.frequency);
    w.u8(static_cast<std::uint8_t>(rec.semantics));
  }

  for (const auto& title : index.tokens.titles) {
    w.u32(static_cast<std::uint32_t>(title.length()));
    for (std::size_t i = 0; i < title.length(); ++i) {
      w.u32(title.token_ids[i]);
      w.u8(static_cast<std::uint8_t>(title.semantics[i]));
    }
  }

  w.u64(index.combinations.size());
  for (CombinationId c = 0; c < index.combinations.size(); ++c) {
    const auto& rec = index.combinations[c];
    w.u64(rec.signature);
    w.u32(rec.frequency);
    w.f64(rec.distance_acc);
    w.u32(rec.k);
    for (TokenId id : index.combinations.members(c)) w.u32(id);
  }

  for (std::size_t p = 0; p < index.product_count(); ++p) {
    const auto refs = index.forward.combinations(static_cast<ProductIndex>(p));
    w.u32(static_cast<std::uint32_t>(refs.size()));
    for (CombinationId c : refs) w.u32(c);
  }
  if (!out) throw SnapshotError("failed to write snapshot");
}

void save_snapshot(const Index& index, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("cannot open " + path.string() + " for writing");
  save_snapshot(index, out);
}

Index load_snapshot(std::istream& in) {
  Reader r(in);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw SnapshotError("not an index snapshot");
  if (const auto v = r.u32(); v != kSnapshotVersion) {
    throw SnapshotError("unsupported snapshot version " + std::to_string(v));
  }

  Index index;
  index.k = static_cast<int>(r.u32());
  index.variant = r.u8() == 0 ? Variant::upm : Variant::upm_plus;
  index.distance_mode = r.u8() == 0 ? DistanceMode::squared : DistanceMode::euclidean;

  auto& s = index.stats;
  s.product_count = r.u64();
  s.distinct_tokens = r.u64();
  s.combination_count = r.u64();
  s.combination_instances = r.u64();
  s.avg_combination_length = r.f64();
  s.avg_title_length = r.f64();
  s.avg_indexed_title_length = r.f64();

  const std::size_t products = r.count(kMaxCount);
  index.product_ids.resize(products);
  index.vendors.resize(products);
  for (std::size_t p = 0; p < products; ++p) {
    index.product_ids[p] = r.i64();
    index.vendors[p] = r.i64();
  }

  const std::size_t tokens = r.count(kMaxCount);
  for (std::size_t t = 0; t < tokens; ++t) {
    std::string surface(r.u32(), '\0');
    r.bytes(surface.data(), surface.size());
    const auto frequency = r.u32();
    const auto sem = semantics_from(r.u8());
    const TokenId id = index.tokens.lexicon.intern(surface, sem);
    if (id != t) throw SnapshotError("duplicate token in snapshot");
    index.tokens.lexicon[id].frequency = frequency;
  }

  index.tokens.titles.resize(products);
  for (auto& title : index.tokens.titles) {
    const auto len = r.u32();
    title.token_ids.reserve(len);
    title.semantics.reserve(len);
    for (std::uint32_t i = 0; i < len; ++i) {
      const auto id = r.u32();
      if (id >= tokens) throw SnapshotError("token id out of range");
      title.token_ids.push_back(id);
      title.semantics.push_back(semantics_from(r.u8()));
    }
    title.sorted_ids = title.token_ids;
    std::sort(title.sorted_ids.begin(), title.sorted_ids.end());
  }
  index.tokens.idf.reserve(tokens);
  for (const auto& rec : index.tokens.lexicon.records()) {
    index.tokens.idf.push_back(
        std::log(static_cast<double>(products) / static_cast<double>(rec.frequency)));
  }

  const std::size_t combos = r.count(kMaxCount);
  index.combinations.reserve(combos);
  std::vector<TokenId> members;
  for (std::size_t c = 0; c < combos; ++c) {
    const auto sig = r.u64();
    const auto frequency = r.u32();
    const auto acc = r.f64();
    const auto k = r.u32();
    if (k > 64) throw SnapshotError("combination length out of range");
    members.resize(k);
    for (auto& m : members) m = r.u32();
    bool inserted = false;
    const auto id = index.combinations.find_or_insert(members, sig, &inserted);
    if (!inserted || id != c) throw SnapshotError("duplicate combination in snapshot");
    index.combinations[id].frequency = frequency;
    index.combinations[id].distance_acc = acc;
  }

  for (std::size_t p = 0; p < products; ++p) {
    const auto len = r.u32();
    for (std::uint32_t i = 0; i < len; ++i) {
      const auto c = r.u32();
      if (c >= combos) throw SnapshotError("combination id out of range");
      index.forward.append(c);
    }
    index.forward.close_product();
  }
  return index;
}

Index load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + path.string());
  return load_snapshot(in);
}

}  // namespace upm
