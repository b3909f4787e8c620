#include "specal/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specal {

int resolve_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs <= 0) return omp_get_max_threads();
    return jobs;
#else
    (void)jobs;
    return 1;
#endif
}

void parallel_for(std::size_t count, int jobs, void (*fn)(std::size_t, void*), void* ctx) {
    const int workers = resolve_jobs(jobs);
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i, ctx);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
        fn(static_cast<std::size_t>(i), ctx);
#else
    for (std::size_t i = 0; i < count; ++i) fn(i, ctx);
#endif
}

}  // namespace specal
