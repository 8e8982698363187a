// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rfcap {

inline unsigned resolve_threads(unsigned requested) {
  return requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
}

/// Runs body(k) for k in [0, n) on up to `threads` workers. Work items must
/// write only to their own output slot; the first exception is rethrown.
template <typename Body>
void parallel_for(std::int64_t n, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::min<std::int64_t>(resolve_threads(threads), n));
  if (threads <= 1) {
    for (std::int64_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::int64_t k; (k = next.fetch_add(1)) < n;) {
          try {
            body(k);
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

}  // namespace rfcap
