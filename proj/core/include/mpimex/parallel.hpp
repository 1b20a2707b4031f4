#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace mpimex {

// Worker count from the MPIMEX_THREADS environment variable; 0 means serial.
inline int env_thread_count() {
  const char* s = std::getenv("MPIMEX_THREADS");
  if (!s) return 0;
  const long v = std::strtol(s, nullptr, 10);
  return v > 0 ? static_cast<int>(v) : 0;
}

// Run fn(i) for i in [0, n) on up to `threads` std::threads (contiguous
// blocks). threads <= 1 runs serially. The first exception thrown by any
// worker is rethrown on the caller.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int nw = std::min(threads, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nw);
  const int chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&, w]() {
      const int lo = w * chunk;
      const int hi = std::min(n, lo + chunk);
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mpimex
