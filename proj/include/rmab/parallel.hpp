#pragma once

#include <cstddef>
#include <functional>

namespace rmab {

// Number of worker threads used by parallel_for; defaults to the hardware
// concurrency, which is also what 0 selects. A value of 1 runs everything on
// the calling thread.
void set_worker_count(int n);
int worker_count();

// Runs fn(0..count-1) on the shared worker budget. Calls made from inside a
// task run inline so nesting never oversubscribes.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace rmab
