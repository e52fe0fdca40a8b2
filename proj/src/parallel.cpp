#include "donn/parallel.hpp"

#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace donn {

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_index(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    const int t = effective_threads(threads);
#ifdef _OPENMP
    if (t > 1) {
        const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(t)
        for (long long i = 0; i < count; ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    (void)t;
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace donn
