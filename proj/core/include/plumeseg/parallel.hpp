#ifndef PLUMESEG_PARALLEL_HPP
#define PLUMESEG_PARALLEL_HPP

#include <functional>

namespace plumeseg {

/// Worker count from PLUMESEG_THREADS (default: hardware concurrency).
int thread_count();

/// Runs fn(i) for i in [begin, end) on up to thread_count() workers,
/// interleaved by index. Only used for loops whose iterations write
/// disjoint outputs and share no accumulators, so results are identical
/// for every thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace plumeseg

#endif
