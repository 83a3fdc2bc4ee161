#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ciimp {

/// Worker count from CI_ENGINE_THREADS, else the hardware parallelism.
inline int engine_thread_count() {
  if (const char* env = std::getenv("CI_ENGINE_THREADS")) {
    const int n = std::atoi(env);
    if (n < 1) throw std::invalid_argument("CI_ENGINE_THREADS must be a positive integer");
    return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(0) … fn(n_items-1) across up to `workers` threads. Work items must
/// be independent; callers keep determinism by writing results into
/// index-addressed slots. The first exception is rethrown after all workers
/// stop.
inline void run_parallel(std::size_t n_items, int workers, const std::function<void(std::size_t)>& fn) {
  if (n_items == 0) return;
  const int use = std::min<std::size_t>(workers < 1 ? 1 : workers, n_items);
  if (use == 1) {
    for (std::size_t i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_items) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(use);
  for (int t = 0; t < use; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ciimp
