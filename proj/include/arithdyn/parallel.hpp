#pragma once

// Index-parallel loops over std::thread. Every index writes its own result
// slot, so callers get identical output for any worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace arithdyn {

namespace detail {
inline std::atomic<unsigned>& worker_count_ref() {
  static std::atomic<unsigned> n{1};
  return n;
}
}  // namespace detail

/// Workers used by parallel_for; 0 selects the hardware concurrency.
inline void set_worker_count(unsigned n) {
  if (n == 0) n = std::max(1U, std::thread::hardware_concurrency());
  detail::worker_count_ref() = n;
}

inline unsigned worker_count() { return detail::worker_count_ref(); }

/// Calls body(i) for i in [0, n). If any call throws, the exception from the
/// smallest failing index is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace arithdyn
