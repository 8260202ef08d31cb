#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace rsr {

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks are
/// claimed dynamically; the exception of the lowest failing index is
/// rethrown after all threads join.
template <typename Task>
void parallel_for(std::int64_t count, int workers, Task&& task) {
  if (count <= 0) return;
  const auto n_threads = static_cast<int>(std::min<std::int64_t>(std::max(workers, 1), count));
  if (n_threads == 1) {
    for (std::int64_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto run = [&] {
    for (std::int64_t i; (i = next.fetch_add(1)) < count;) {
      try {
        task(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads - 1);
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(run);
    run();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rsr
