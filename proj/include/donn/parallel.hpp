#pragma once

// Trial-level parallelism. Simulations never share mutable state, so the only
// parallel layer is an index loop over independent work items writing to
// per-index result slots. threads <= 1 takes the serial reference path, used
// by the determinism tests and the benchmark; otherwise an OpenMP
// parallel-for with dynamic scheduling.

#include <cstddef>
#include <functional>

namespace donn {

/// Worker count actually used for a request (0 = hardware concurrency).
int effective_threads(int requested);

void parallel_for_index(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace donn
