#pragma once

#include <omp.h>

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

namespace superhedge {

/// Runs fn(i) for i in [0, count) across OpenMP threads. Each call must only
/// write to its own slot; the first exception thrown is rethrown after the loop.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  std::exception_ptr error;
  std::mutex mu;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

inline void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace superhedge
