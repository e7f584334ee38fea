#pragma once

// Deterministic data-parallel helpers.  Work is always split into the same
// fixed number of chunks regardless of the thread count, and chunk results
// are reduced in chunk order, so floating-point sums are bit-stable for a
// given input.  ASYMPTOTE_THREADS caps the number of worker threads.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace asym::parallel {

inline unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ASYMPTOTE_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw);
    } catch (...) {
    }
  }
  return hw;
}

inline constexpr std::size_t kChunks = 64;

/// Run body(begin, end, chunk_index) over [0, n) split into kChunks ranges.
inline void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = std::min<std::size_t>(kChunks, std::max<std::size_t>(n, 1));
  auto range = [&](std::size_t c) {
    return std::pair{n * c / chunks, n * (c + 1) / chunks};
  };
  const unsigned threads = std::min<unsigned>(thread_count(), static_cast<unsigned>(chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = range(c);
      body(b, e, c);
    }
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += threads) {
        try {
          auto [b, e] = range(c);
          body(b, e, c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Sum of f(i) over [0, n) with a fixed reduction tree.
inline double sum(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> partial(kChunks, 0.0);
  for_chunks(n, [&](std::size_t b, std::size_t e, std::size_t c) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += f(i);
    partial[c] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace asym::parallel
