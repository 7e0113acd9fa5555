#pragma once

#include <cstddef>
#include <functional>

namespace cuspforge {

// Worker count: CUSPFORGE_THREADS when set to a positive integer, otherwise
// the hardware concurrency. set_worker_count overrides both.
unsigned worker_count();
void set_worker_count(unsigned n);

// Runs body(k) for k in [0, n) across worker threads in contiguous blocks.
// Bodies must only write to their own slot; the first exception thrown by
// any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cuspforge
