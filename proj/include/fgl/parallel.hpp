#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fgl {

// FGL_THREADS caps worker concurrency; unset or 1 means sequential. Work is
// partitioned by index and results land in per-index slots, so counts are
// identical whatever the thread budget.
inline int thread_budget() {
  const char* env = std::getenv("FGL_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  const long hw = std::thread::hardware_concurrency();
  return static_cast<int>(v < hw || hw == 0 ? v : hw);
}

template <typename Fn>
void parallel_for(std::int64_t count, Fn&& fn) {
  const int workers = thread_budget();
  if (workers <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(
      workers < count ? workers : static_cast<int>(count));
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) {
    pool.emplace_back([&] {
      for (std::int64_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fgl
