#pragma once

#include <cstddef>
#include <functional>

namespace fracgreen {

/// Worker count: FRACGREEN_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Overrides worker_count() for the whole process; 0 restores the default.
void set_worker_override(unsigned n);

/// Calls body(i) for i in [0, n) on up to worker_count() threads.
/// Each index is visited exactly once; callers write results by index, so
/// output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracgreen
