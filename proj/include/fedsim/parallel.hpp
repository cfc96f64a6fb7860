#pragma once

#include <cstddef>
#include <functional>

namespace fedsim {

// Worker-thread count used by parallel_for. Results must not depend on it:
// parallel bodies write to disjoint, preallocated slots and all floating-point
// reductions happen afterwards in a fixed sequential order.
void set_num_threads(int n);
int num_threads();

// Runs body(i) for i in [0, n). Partitions the index range over the
// configured worker threads; with one thread (the default) it is a plain
// loop. Exceptions thrown by the body are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fedsim
