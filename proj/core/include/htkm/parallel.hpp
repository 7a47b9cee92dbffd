#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace htkm {

/// Runs fn(i) for i in [0, n). With threads > 1 the iterations are
/// distributed over a small worker pool; each iteration must be
/// self-contained (derive its own seed from the task index) so results do
/// not depend on the schedule. The first exception thrown by any task is
/// rethrown on the calling thread.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::mutex mu;
  std::exception_ptr first_error;
  int next = 0;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= n || first_error) return;
          i = next++;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace htkm
