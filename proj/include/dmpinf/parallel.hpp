#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dmpinf {

/// Splits [0, n) into `threads` contiguous chunks and calls
/// body(chunk, begin, end) for each. Chunk boundaries depend only on n and
/// the thread count, so per-chunk partial results can be reduced in chunk
/// order deterministically.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t threads, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t c = 0; c < threads; ++c) {
      const std::size_t begin = n * c / threads;
      const std::size_t end = n * (c + 1) / threads;
      pool.emplace_back([&, c, begin, end] {
        try {
          body(c, begin, end);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t chunk_count(std::size_t n, std::size_t threads) {
  return std::max<std::size_t>(1, std::min(threads, n));
}

}  // namespace dmpinf
