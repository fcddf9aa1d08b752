#pragma once

#include <cstddef>
#include <functional>

namespace kgalign {

// Process-wide cap on data-parallel helpers (similarity rows). 1 = serial.
void set_thread_count(int threads);
int thread_count();

// Runs fn(begin, end) over a static partition of [0, n). Partitioning is
// index-based, so results are deterministic regardless of thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace kgalign
