#pragma once

#include <cstddef>
#include <functional>

namespace amortize {

/// Worker count: AMORTIZE_THREADS if set and positive, else logical cores.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t max_workers = 0);

}  // namespace amortize
