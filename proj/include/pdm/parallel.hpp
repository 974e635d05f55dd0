#ifndef PDM_PARALLEL_HPP
#define PDM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pdm {

/// Thread cap from PDM_SPECTRA_THREADS; 1 when unset or unparsable.
inline unsigned threads_from_env() {
  const char* v = std::getenv("PDM_SPECTRA_THREADS");
  if (!v) return 1;
  try {
    const long n = std::stol(v);
    return n >= 1 ? static_cast<unsigned>(n) : 1u;
  } catch (...) {
    return 1;
  }
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// evaluated exactly once, so results written by index are order-independent.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pdm

#endif  // PDM_PARALLEL_HPP
