#pragma once

#include <cstddef>
#include <functional>

namespace nematic {

/// Worker count taken from NEMATIC_THREADS (default 1, clamped to [1, 256]).
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). The chunking depends
/// only on n and the worker count, so per-chunk results are reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace nematic
