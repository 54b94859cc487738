#pragma once

#include <cstddef>
#include <functional>

namespace korn {

/// Worker count: KORN_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = thread_count()).
/// Results must be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace korn
