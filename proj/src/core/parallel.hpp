#ifndef GGLOPT_CORE_PARALLEL_HPP_
#define GGLOPT_CORE_PARALLEL_HPP_

#include <functional>

namespace gglopt {

// Worker count for parallel sections: GGLOPT_THREADS when set to a positive
// value, otherwise the hardware concurrency (min 1).
int thread_budget();

// Runs fn(0..count-1) across up to thread_budget() threads. Tasks must write
// disjoint data. The first exception thrown by any task is rethrown on the
// calling thread after all workers finish.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace gglopt

#endif  // GGLOPT_CORE_PARALLEL_HPP_
