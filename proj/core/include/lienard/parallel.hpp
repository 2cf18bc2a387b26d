#pragma once

#include <cstddef>
#include <functional>

namespace lienard {

/// Worker count used when an options struct says 0: hardware concurrency.
unsigned default_thread_count();

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Work is handed out by an atomic counter; callers write results into
/// slot i so the outcome never depends on scheduling. The first exception
/// thrown by any fn is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace lienard
