#include "curvgraph/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace curvgraph {

namespace {

int env_thread_cap() {
  const char* raw = std::getenv("CURVGRAPH_THREADS");
  if (raw == nullptr) return 0;
  int value = std::atoi(raw);
  return value > 0 ? value : 0;
}

}  // namespace

int resolve_threads(int requested) {
  int cap = env_thread_cap();
  int threads = requested;
  if (threads <= 0) {
    threads = cap > 0 ? cap
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  if (cap > 0) threads = std::min(threads, cap);
  return std::max(threads, 1);
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end]() {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace curvgraph
