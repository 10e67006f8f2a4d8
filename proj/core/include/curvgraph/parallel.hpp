#pragma once

#include <cstddef>
#include <functional>

namespace curvgraph {

// Worker count resolution: explicit `requested` wins when > 0, otherwise the
// CURVGRAPH_THREADS environment variable, otherwise hardware concurrency.
// CURVGRAPH_THREADS always acts as an upper cap.
int resolve_threads(int requested = 0);

// Runs fn(i) for i in [0, count) on up to `threads` workers over static
// contiguous chunks. Each index is processed exactly once, so writes into
// per-index slots give results independent of the worker count. Exceptions
// from workers are rethrown on the caller thread (first one wins).
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace curvgraph
