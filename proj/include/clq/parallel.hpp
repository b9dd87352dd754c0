#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace clq {

inline unsigned default_thread_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1u : n;
}

/// Splits [0, n) into at most `threads` contiguous chunks and runs
/// body(begin, end, chunk) on each. Chunk c always covers the same range for
/// a given (n, threads), so per-chunk results can be merged in chunk order.
template <typename Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(n, 1));
  if (chunks <= 1) {
    body(std::size_t{0}, n, std::size_t{0});
    return;
  }
  const std::size_t step = (n + chunks - 1) / chunks;
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::jthread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = std::min(n, c * step);
    const std::size_t end = std::min(n, begin + step);
    pool.emplace_back([&, begin, end, c] {
      try {
        body(begin, end, c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::size_t chunk_count(std::size_t n, unsigned threads) {
  return std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1));
}

}  // namespace clq
