#pragma once

#include <cstddef>
#include <functional>

namespace wander {

// Number of worker threads: WANDER_LAB_THREADS if set and positive, otherwise
// the hardware concurrency (at least 1).
unsigned worker_count();

// Calls body(i) for i in [0, count). Iterations must be independent; each
// writes only to its own output slot, so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace wander
