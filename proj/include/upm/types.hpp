#pragma once

#include <cstdint>
#include <limits>

namespace upm {

// Identifiers as they appear in input files.
using ProductId = std::int64_t;
using VendorId = std::int64_t;

// Dense in-memory handles. ProductIndex is the row of a product in its
// Dataset; the other handles index the corresponding lexicon or universe.
using ProductIndex = std::uint32_t;
using TokenId = std::uint32_t;
using CombinationId = std::uint32_t;
using ClusterId = std::uint32_t;

inline constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

}  // namespace upm
