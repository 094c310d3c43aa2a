#pragma once

// Deterministic data-parallel loops: each index writes its own slot, so
// results do not depend on scheduling.

#include <cstdint>
#include <functional>

namespace sequil {

// Worker count used by parallel_for. 0 restores the default: the
// SEQUIL_THREADS environment variable, else the hardware concurrency.
void set_thread_count(int threads);
int thread_count();

// Calls fn(begin, end) on disjoint chunks covering [0, n), each at least
// `grain` long.
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& fn,
                  int64_t grain = 1024);

}  // namespace sequil
