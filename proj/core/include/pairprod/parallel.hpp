#pragma once

#include <cstddef>
#include <functional>

namespace pairprod {

/// Runs body(i) for i in [0, count) on up to `jobs` worker threads.
/// Work items are claimed dynamically; the first exception thrown by any item is
/// rethrown on the calling thread after all workers have joined.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

/// Hardware concurrency, never less than 1.
unsigned default_jobs();

}  // namespace pairprod
