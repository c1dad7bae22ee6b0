#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace causalkit {

struct ExecutionOptions {
  // 1 runs inline; 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
};

// Runs body(k) for k in [0, count). Each index is executed exactly once and
// results must be written to index-addressed storage by the caller, so the
// outcome never depends on scheduling. If any body throws, the exception of
// the lowest failing index is rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t count, ExecutionOptions exec, Body&& body) {
  unsigned threads = exec.threads == 0 ? std::thread::hardware_concurrency()
                                       : exec.threads;
  threads = std::max(1u, threads);
  if (threads == 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }

  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < count; k += workers) {
        try {
          body(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace causalkit
