#pragma once

#include <cstddef>
#include <functional>

namespace polymer {

// Number of worker threads to use when the caller passes 0.
unsigned default_thread_count() noexcept;

/// Calls body(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Indices are handed out in order; callers store results by
/// index, so the reduction order never depends on scheduling. If any call
/// throws, the exception from the smallest failing index is rethrown after all
/// workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace polymer
