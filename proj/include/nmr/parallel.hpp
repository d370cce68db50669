#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace nmr {

// Runs task(i) for i in [0, n) and returns the results in index order, so
// the output never depends on scheduling. The first exception is rethrown.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F&& task) -> std::vector<decltype(task(std::size_t{}))> {
  using R = decltype(task(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  const std::size_t workers = std::min<std::size_t>(threads <= 1 ? 1 : threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) slots[i].emplace(task(i));
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
              slots[i].emplace(task(i));
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
              next.store(n);
            }
          }
        });
    }
    if (error) std::rethrow_exception(error);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace nmr
