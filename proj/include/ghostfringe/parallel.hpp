#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ghostfringe {

/// Worker count used when callers pass 0.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs body(chunk) for chunk = 0..chunks-1 on up to `workers` threads.
/// Chunks are claimed dynamically, so body must only write chunk-owned state.
template <typename Body>
void parallel_chunks(std::size_t chunks, unsigned workers, Body&& body) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(chunks, 1)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          body(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = chunks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Index-parallel loop; results must be written to index-owned slots.
template <typename Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  constexpr std::size_t grain = 8;
  const std::size_t chunks = (n + grain - 1) / grain;
  parallel_chunks(chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * grain);
    for (std::size_t i = c * grain; i < end; ++i) body(i);
  });
}

}  // namespace ghostfringe
