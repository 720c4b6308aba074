#pragma once

#include <cstddef>
#include <functional>

namespace tactilemap {

// Worker cap: min(hardware_concurrency, TACTILEMAP_THREADS). Also applied to
// the BLAS pool on first query.
int worker_count();

// Splits [0,n) into contiguous chunks, one worker thread each. The body must
// write disjoint state per index (or commutative reductions only).
void parallel_for(size_t n, const std::function<void(size_t begin, size_t end)>& body);

}  // namespace tactilemap
