#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tdd {

/// Worker count used by the Monte Carlo loops. 1 runs everything inline.
int thread_count();
void set_thread_count(int n);

/// Calls fn(i) for i in [0, n). Work is split into contiguous blocks, one per
/// worker; callers store results by index so reductions stay ordered and the
/// output does not depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, thread_count()));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t used = std::min(workers, n);
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(used);
  for (std::size_t w = 0; w < used; ++w) {
    const std::size_t begin = n * w / used;
    const std::size_t end = n * (w + 1) / used;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tdd
