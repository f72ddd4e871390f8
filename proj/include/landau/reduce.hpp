#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace landau {

// Number of worker threads: LF_THREADS if set (clamped to [1,256]),
// otherwise std::thread::hardware_concurrency().
int worker_count();

// Tolerance multiplier from LF_TOL_SCALE (default 1.0). Checks report both the
// raw margin and the verdict under the scaled tolerance.
double tol_scale();

// Pairwise (tree) sum with a fixed reduction shape. The result depends only on
// the input values and length, never on thread count or chunk scheduling.
double pairwise_sum(std::span<const double> x);

// Runs fn(block) for block = 0..nblocks-1 on up to worker_count() threads.
// Callers must write results indexed by block and reduce them in fixed order
// afterwards; the scheduling order is unspecified but the data flow is not.
void parallel_blocks(std::size_t nblocks, const std::function<void(std::size_t)>& fn);

} // namespace landau
