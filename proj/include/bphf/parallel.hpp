#pragma once

// Minimal fork-join helper. Work is split into contiguous index ranges, one
// per worker; the caller merges per-worker results in worker order, so every
// reduction in the project is independent of the thread count.

#include <cstdint>
#include <thread>
#include <vector>

namespace bphf {

inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// fn(worker_index, begin, end) over [0, total). Runs inline when one worker
// suffices. Exceptions from workers are rethrown on the calling thread.
template <class Fn>
void parallel_chunks(std::uint64_t total, int threads, Fn&& fn) {
  unsigned workers = resolve_threads(threads);
  if (workers > total) workers = total == 0 ? 1 : static_cast<unsigned>(total);
  if (workers <= 1) {
    fn(0u, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  std::uint64_t chunk = total / workers, rem = total % workers;
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t len = chunk + (w < rem ? 1 : 0);
    std::uint64_t end = begin + len;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bphf
