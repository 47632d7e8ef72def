#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace teamchess {

inline unsigned default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Items are claimed
/// dynamically, so fn must write results into slot i rather than append.
/// The first exception thrown by any item is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (n == 0) return;
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    const std::size_t count = std::min<std::size_t>(workers, n);
    threads.reserve(count);
    for (std::size_t t = 0; t < count; ++t) threads.emplace_back(body);
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace teamchess
