#pragma once

// Index-based parallel loop. Work item i writes only to slot i, so results
// are independent of scheduling; any thread count yields the same output.

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace progress::detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline void parallel_for(std::size_t n, int n_threads,
                         const std::function<void(std::size_t)>& body) {
  int workers = resolve_threads(n_threads);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  int spawn = static_cast<int>(std::min<std::size_t>(workers, n));
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
}

}  // namespace progress::detail
