#pragma once

#include <cstddef>
#include <functional>

namespace macroent {

// Worker count used when a caller passes parallelism <= 0.
int default_parallelism();

// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index is
// executed exactly once; callers write results into per-index slots so the
// outcome does not depend on the worker count. The first exception thrown by
// any task is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &fn);

} // namespace macroent
