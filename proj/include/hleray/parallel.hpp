#pragma once

// Bounded worker pool for independent parameter points; results come back in
// input order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace hleray {

/// Worker count used when the caller asks for 0.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// out[i] = fn(items[i]) on at most `workers` threads (0 = default). The
/// first exception thrown by any call is rethrown after all workers stop.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn, unsigned workers = 0)
    -> std::vector<decltype(fn(items.front()))> {
  using R = decltype(fn(items.front()));
  const std::size_t n = items.size();
  std::vector<std::optional<R>> slots(n);
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        slots[i].emplace(fn(items[i]));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

} // namespace hleray
