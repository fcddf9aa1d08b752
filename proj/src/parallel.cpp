#include "kgalign/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace kgalign {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) { g_threads = std::max(1, threads); }
int thread_count() { return g_threads; }

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  int t = std::min<std::size_t>(g_threads.load(), n);
  if (t <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> workers;
  std::size_t chunk = (n + t - 1) / t;
  for (int i = 0; i < t; ++i) {
    std::size_t begin = i * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace kgalign
