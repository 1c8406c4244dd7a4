// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tsnip {

/// Runs `body(i)` for every i in [0, count) on up to `threads` threads.
///
/// Indices are handed out dynamically; callers write results by index, so
/// the output never depends on which thread ran what. The first exception
/// thrown by any body is rethrown after all threads join.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::min(threads, count);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

/// Runs one fixed job list per worker, each on its own thread. Empty lists
/// are no-ops.
template <class Job>
void run_job_lists(const std::vector<std::vector<Job>>& lists,
                   const std::function<void(std::size_t worker, const Job&)>& run) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto drive = [&](std::size_t w) {
    for (const auto& job : lists[w]) {
      try {
        run(w, job);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (lists.size() <= 1) {
    if (!lists.empty()) drive(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(lists.size());
    for (std::size_t w = 0; w < lists.size(); ++w) pool.emplace_back(drive, w);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tsnip
