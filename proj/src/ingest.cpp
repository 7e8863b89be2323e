#include "upm/ingest.hpp"

#include <charconv>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"

namespace upm {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw IngestError(std::string(source) + ": row at line " + std::to_string(line) + ": " +
                    what);
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields[0]).empty();
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return in;
}

}  // namespace

std::size_t Dataset::vendor_count() const {
  std::unordered_set<VendorId> v;
  for (const auto& p : products) v.insert(p.vendor_id);
  return v.size();
}

std::size_t Dataset::truth_cluster_count() const {
  std::unordered_set<std::int64_t> c;
  for (const auto& p : products) {
    if (p.truth_cluster_id) c.insert(*p.truth_cluster_id);
  }
  return c.size();
}

bool Dataset::has_truth() const {
  if (products.empty()) return false;
  for (const auto& p : products) {
    if (!p.truth_cluster_id) return false;
  }
  return true;
}

std::optional<InputFormat> parse_input_format(std::string_view name) {
  if (name == "simple") return InputFormat::simple;
  if (name == "published") return InputFormat::published;
  return std::nullopt;
}

Dataset parse_products(std::istream& in, InputFormat format, std::string_view source) {
  csv::Reader reader(in);
  std::vector<std::string> fields;
  const std::size_t min_columns = format == InputFormat::simple ? 3 : 7;

  try {
    if (!reader.next(fields)) throw IngestError(std::string(source) + ": missing header row");
    if (fields.size() < min_columns) {
      throw IngestError(std::string(source) + ": header has " + std::to_string(fields.size()) +
                        " columns, expected at least " + std::to_string(min_columns));
    }

    Dataset dataset;
    std::unordered_set<ProductId> seen;
    while (reader.next(fields)) {
      const std::size_t line = reader.record_line();
      if (blank(fields)) continue;
      if (fields.size() < min_columns) {
        fail(source, line, "expected " + std::to_string(min_columns) + " columns, got " +
                               std::to_string(fields.size()));
      }
      RawProduct p;
      const auto id = parse_int(fields[0]);
      if (!id) fail(source, line, "product id '" + fields[0] + "' is not an integer");
      p.product_id = *id;
      p.title = std::string(trim(fields[1]));
      if (p.title.empty()) fail(source, line, "empty title");
      const auto vendor = parse_int(fields[2]);
      if (!vendor) fail(source, line, "vendor id '" + fields[2] + "' is not an integer");
      p.vendor_id = *vendor;
      if (format == InputFormat::published) {
        const auto cluster = parse_int(fields[3]);
        if (!cluster) fail(source, line, "cluster id '" + fields[3] + "' is not an integer");
        p.truth_cluster_id = *cluster;
      }
      if (!seen.insert(p.product_id).second) {
        fail(source, line, "duplicate product id " + std::to_string(p.product_id));
      }
      dataset.products.push_back(std::move(p));
    }
    return dataset;
  } catch (const IngestError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IngestError(std::string(source) + ": " + e.what());
  }
}

Dataset load_products(const std::filesystem::path& path, InputFormat format) {
  auto in = open(path);
  return parse_products(in, format, path.string());
}

void attach_truth(Dataset& dataset, std::istream& in, std::string_view source) {
  std::unordered_map<ProductId, std::size_t> row_of;
  for (std::size_t i = 0; i < dataset.products.size(); ++i) {
    row_of.emplace(dataset.products[i].product_id, i);
  }
  csv::Reader reader(in);
  std::vector<std::string> fields;
  try {
    if (!reader.next(fields)) throw IngestError(std::string(source) + ": missing header row");
    while (reader.next(fields)) {
      const std::size_t line = reader.record_line();
      if (blank(fields)) continue;
      if (fields.size() < 2) fail(source, line, "expected product_id,cluster_id");
      const auto id = parse_int(fields[0]);
      const auto cluster = parse_int(fields[1]);
      if (!id || !cluster) fail(source, line, "non-integer field");
      const auto it = row_of.find(*id);
      if (it == row_of.end()) fail(source, line, "unknown product id " + fields[0]);
      dataset.products[it->second].truth_cluster_id = *cluster;
    }
  } catch (const IngestError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IngestError(std::string(source) + ": " + e.what());
  }
}

void attach_truth(Dataset& dataset, const std::filesystem::path& path) {
  auto in = open(path);
  attach_truth(dataset, in, path.string());
}

MatchSet load_ground_truth(const Dataset& dataset) {
  std::unordered_map<std::int64_t, std::vector<ProductId>> members;
  std::vector<std::int64_t> order;
  for (const auto& p : dataset.products) {
    if (!p.truth_cluster_id) {
      throw IngestError("product " + std::to_string(p.product_id) + " has no truth cluster");
    }
    auto [it, fresh] = members.try_emplace(*p.truth_cluster_id);
    if (fresh) order.push_back(*p.truth_cluster_id);
    it->second.push_back(p.product_id);
  }
  std::vector<ProductPair> pairs;
  for (auto cluster : order) {
    const auto& ids = members[cluster];
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) pairs.emplace_back(ids[i], ids[j]);
    }
  }
  return MatchSet(std::move(pairs));
}

}  // namespace upm
