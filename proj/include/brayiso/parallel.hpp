#pragma once

// Ordered parallel map for independent sweep points.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace brayiso {

/// Worker count: BRAY_ISO_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned thread_count();

/// Evaluates f(0..n-1) on up to thread_count() workers. Results keep index
/// order; the first exception (by index) is rethrown after all workers finish.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& f) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        slots[k].emplace(f(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace brayiso
