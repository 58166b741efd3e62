#pragma once

#include <cstddef>
#include <functional>

namespace geodint {

// Number of worker threads for n independent tasks: hardware concurrency,
// capped by GEODINT_THREADS when set, never more than n.
std::size_t worker_count(std::size_t n);

// Runs body(i) for i in [0, n). The first exception thrown by any task is
// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace geodint
