#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace hjhom {

// Runs fn(0..n-1) on up to `jobs` worker threads. Tasks must not share
// mutable state beyond their own output slot; with jobs <= 1 this is a
// plain loop, which keeps single-core runs free of thread overhead.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min(jobs, n);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace hjhom
