#pragma once

#include <functional>

namespace coocmatch {

// COOCMATCH_JOBS env var if set, else hardware_concurrency, else 1.
int default_jobs();

// Runs fn(0..n-1) on up to `jobs` threads (jobs <= 0 means default_jobs()).
// Work items must be independent; results written by index stay
// deterministic regardless of thread count.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace coocmatch
