#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "upm/index.hpp"

namespace upm {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary index snapshot, version 1. All integers little-endian, doubles as
// IEEE-754 bit patterns in a u64.
//
//   magic        8 bytes  "UPMINDEX"
//   version      u32      1
//   k            u32
//   variant      u8       0 = upm, 1 = upm+
//   distance     u8       0 = squared, 1 = euclidean
//   stats        u64 products, u64 tokens, u64 combinations,
//                u64 instances, f64 avg_combination_length,
//                f64 avg_title_length, f64 avg_indexed_title_length
//   products     u64 n, then n x (i64 product_id, i64 vendor_id)
//   tokens       u64 n, then n x (u32 len, bytes, u32 frequency, u8 semantics)
//   titles       n_products x (u32 len, len x (u32 token_id, u8 semantics))
//   combinations u64 n, then n x (u64 signature, u32 frequency,
//                f64 distance_acc, u32 k, k x u32 sorted token ids)
//   forward      n_products x (u32 len, len x u32 combination_id)
//
// idf values and sorted title ids are recomputed on load.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void save_snapshot(const Index& index, std::ostream& out);
void save_snapshot(const Index& index, const std::filesystem::path& path);
Index load_snapshot(std::istream& in);
Index load_snapshot(const std::filesystem::path& path);

}  // namespace upm
