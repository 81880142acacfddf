#ifndef FLOWDEP_PARALLEL_HPP
#define FLOWDEP_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace flowdep {

// Runs fn(0 .. n_jobs-1) on at most `threads` workers. Jobs must write only
// into their own output slot; the set of jobs and their individual results are
// then independent of the schedule, so callers stay deterministic for any
// thread count. threads <= 1 runs inline.
inline void run_jobs(std::size_t n_jobs, unsigned threads,
                     const std::function<void(std::size_t)>& fn) {
  if (n_jobs == 0) return;
  if (threads <= 1 || n_jobs == 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  const unsigned workers = unsigned(std::min<std::size_t>(threads, n_jobs));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
          if (i >= n_jobs) return;
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
        next.store(n_jobs, std::memory_order_relaxed);  // stop other workers
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace flowdep

#endif
