#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stablecx {

/// Worker count for Monte Carlo and enumeration loops. 0 selects the
/// hardware concurrency. Results never depend on this value.
struct Workers {
  unsigned count = 0;

  unsigned resolve(std::size_t jobs) const {
    unsigned n = count != 0 ? count : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
  }
};

/// Calls body(chunk_begin, chunk_end) over fixed-size chunks of [0, total).
/// Chunk boundaries depend only on `total` and `chunk`, never on the worker
/// count, so callers writing into per-index slots get identical output.
template <typename Body>
void parallel_chunks(std::size_t total, std::size_t chunk, Workers workers, Body&& body) {
  if (total == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (total + chunk - 1) / chunk;
  const unsigned n = workers.resolve(chunks);
  if (n <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c * chunk, std::min(total, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
        body(c * chunk, std::min(total, (c + 1) * chunk));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n - 1);
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Fills out[j] = f(j) for j in [0, out.size()).
template <typename T, typename F>
void parallel_fill(std::vector<T>& out, Workers workers, F&& f, std::size_t chunk = 4096) {
  parallel_chunks(out.size(), chunk, workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) out[j] = f(j);
  });
}

}  // namespace stablecx
