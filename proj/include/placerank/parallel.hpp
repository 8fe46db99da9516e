#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace placerank {

/// Runs fn(i) for i in [0, n) across up to jobs threads (0 = hardware
/// concurrency). Work is split into contiguous chunks; fn must only write
/// to per-index state so the result is identical for any job count.
inline void parallel_for(std::size_t n, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (workers > n) workers = n;
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace placerank
