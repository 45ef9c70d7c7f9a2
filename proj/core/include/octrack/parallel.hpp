#pragma once

#include <cstddef>
#include <functional>

namespace octrack {

// Worker cap: TRACKER_THREADS if set to a positive integer, else the hardware
// concurrency (at least 1).
int worker_count();

// Runs fn(0..count-1) on up to worker_count() threads. Nested calls from a
// worker run serially on that worker. If any task throws, the exception of the
// lowest failing index is rethrown after all tasks finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace octrack
