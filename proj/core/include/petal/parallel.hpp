#pragma once
#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace petal {

// PETAL_THREADS caps worker count; unset or invalid means single-threaded.
inline unsigned thread_cap() {
  const char* env = std::getenv("PETAL_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return unsigned(v) < hw ? unsigned(v) : hw;
}

// Deterministic contiguous-chunk fan-out: f(i) must write only slot i of a
// preallocated result, so the outcome is independent of the thread count.
// The first exception (by index) is rethrown on the caller thread.
template <class F>
void parallel_for(size_t n, F&& f) {
  unsigned workers = thread_cap();
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  if (workers > n) workers = unsigned(n);
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace petal
