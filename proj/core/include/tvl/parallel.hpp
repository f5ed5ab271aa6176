#pragma once

#include <cstddef>
#include <functional>

namespace tvl {

// Worker count: TVL_THREADS if set to a positive integer, otherwise the
// available hardware parallelism (at least 1).
int worker_count();

// Runs fn(i) for i in [0, count) on a bounded pool. Calls made from inside a
// worker run inline. The first exception thrown by any task is rethrown
// after all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int workers = 0);

}  // namespace tvl
