#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace amp {

/// Worker count: AMP_THREADS if set and positive, else hardware concurrency.
int worker_count();

/// Calls f(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; results must be written to per-index slots by the caller so
/// that output order never depends on scheduling. The first exception thrown
/// by any task is rethrown after all workers stop.
template <class F>
void parallel_for(std::size_t n, F&& f, int threads = worker_count()) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(threads > 0 ? threads : 1, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace amp
