#pragma once

#include <cstddef>
#include <functional>

namespace ckt {

// Thread budget from CKT_THREADS, else the hardware concurrency (at least 1).
unsigned default_threads();

// Runs fn(i) for i in [0, count) on up to `threads` workers. Tasks are handed
// out through a shared counter; callers write into pre-sized slots so the
// result never depends on scheduling. If tasks throw, the exception of the
// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace ckt
