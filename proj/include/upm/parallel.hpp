#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace upm {

// Splits [0, n) into `threads` contiguous chunks and runs fn(begin, end, chunk)
// on each. Chunk c always covers the same range for a given (n, threads), so
// callers can merge per-chunk results in chunk order.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    fn(std::size_t{0}, n, 0u);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    pool.emplace_back([&fn, begin, end, c] { fn(begin, end, static_cast<unsigned>(c)); });
  }
  for (auto& t : pool) t.join();
}

inline std::size_t chunk_count(std::size_t n, unsigned threads) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) return 1;
  return std::min<std::size_t>(threads, n);
}

}  // namespace upm
