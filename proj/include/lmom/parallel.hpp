#pragma once
// ============================================================================
// parallel: minimal fork-join helper.
//
// Work items are indexed and workers write into preallocated slots, so any
// reduction over the results can run in a fixed index order afterwards.  That
// keeps every report bit-identical no matter how many threads ran the loop.
// ============================================================================

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lmom {

// Explicit hint > 0 wins, else LMOM_THREADS, else hardware concurrency.
inline int resolve_threads(int hint = 0) {
  if (hint > 0) return hint;
  if (const char* env = std::getenv("LMOM_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// fn(i) for i in [0, n); fn must not throw.
template <class Fn>
void parallel_for_index(std::size_t n, int threads, Fn&& fn) {
  std::size_t want = std::max(threads, 1);
  want = std::min(want, n ? n : std::size_t{1});
  if (want <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(want);
  for (std::size_t t = 0; t < want; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace lmom
