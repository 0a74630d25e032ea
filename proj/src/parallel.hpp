#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace origami::detail {

/// ORIGAMI_THREADS if set and positive, else the hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("ORIGAMI_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls f(i) for i in [0, count) on a small worker pool, handing out
/// indices in increasing order. The first exception is rethrown.
template <typename F>
void parallel_for(std::uint64_t count, F f) {
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), count));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_lock;
  auto work = [&] {
    try {
      for (std::uint64_t i; (i = next.fetch_add(1)) < count;) f(i);
    } catch (...) {
      std::lock_guard lock(error_lock);
      if (!error) error = std::current_exception();
      next = count;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace origami::detail
