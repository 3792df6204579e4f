#pragma once

#include <cstddef>
#include <functional>

namespace phaseless {

// Worker cap: PHASELESS_THREADS if set (clamped to >= 1), else hardware
// concurrency.
std::size_t thread_budget();

// Runs fn over [0, n) split into contiguous ranges, one per worker. Ranges are
// fixed by (n, worker count) alone and workers write disjoint slices, so
// results do not depend on scheduling. Nested calls run serial.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}
