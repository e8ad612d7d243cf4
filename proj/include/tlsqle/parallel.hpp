#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace tlsqle {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must be
// independent; callers store results by index so assembly order is
// deterministic regardless of scheduling.
inline void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<size_t> next{0};
  for (size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace tlsqle
