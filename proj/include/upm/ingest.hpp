#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "upm/match_set.hpp"
#include "upm/types.hpp"

namespace upm {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawProduct {
  ProductId product_id = 0;
  std::string title;
  VendorId vendor_id = 0;
  std::optional<std::int64_t> truth_cluster_id;

  friend bool operator==(const RawProduct&, const RawProduct&) = default;
};

// Products in file order. Immutable once loaded.
struct Dataset {
  std::vector<RawProduct> products;

  std::size_t title_count() const { return products.size(); }
  std::size_t vendor_count() const;
  // Number of distinct truth clusters; 0 when no truth is attached.
  std::size_t truth_cluster_count() const;
  bool has_truth() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// simple:    id,title,vendor
// published: product_id,title,vendor_id,cluster_id,cluster_label,
//            category_id,category_label
enum class InputFormat { simple, published };

std::optional<InputFormat> parse_input_format(std::string_view name);

Dataset load_products(const std::filesystem::path& path, InputFormat format);
Dataset parse_products(std::istream& in, InputFormat format,
                       std::string_view source = "<stream>");

// Reads a product_id,cluster_id CSV and sets truth_cluster_id on every
// listed product. Unknown product ids are an error.
void attach_truth(Dataset& dataset, const std::filesystem::path& path);
void attach_truth(Dataset& dataset, std::istream& in,
                  std::string_view source = "<stream>");

// All unordered pairs of distinct products sharing a truth cluster.
MatchSet load_ground_truth(const Dataset& dataset);

}  // namespace upm
