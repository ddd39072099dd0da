#pragma once
// Minimal data-parallel helper used by embarrassingly parallel sweeps
// (oracle verification, k-grid scans, spectral transforms).

#include <cstddef>
#include <functional>

namespace nsm {

/// Worker count: the NSM_THREADS environment variable when set to a positive
/// integer, otherwise std::thread::hardware_concurrency() (at least 1).
unsigned thread_count();

/// Runs fn(i) for every i in [0, n), distributing contiguous index blocks
/// over thread_count() workers and blocking until all finish.  Results must
/// be written to disjoint, preallocated slots so that any later reduction is
/// order-independent.  The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace nsm
