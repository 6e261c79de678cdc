#ifndef HDM_PARALLEL_HPP_
#define HDM_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace hdm {

// Resolves a worker-count request: n > 0 is taken as-is, anything else means
// the HDM_THREADS environment variable or, failing that, the hardware
// concurrency.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, count) across at most `threads` workers. Tasks must
// be independent; each writes only to its own output slot, so the result is
// identical for any worker count. The first exception thrown by a task is
// rethrown on the calling thread.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace hdm

#endif  // HDM_PARALLEL_HPP_
