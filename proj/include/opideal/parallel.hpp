#pragma once

#include <cstddef>
#if defined(_OPENMP)
#include <omp.h>
#endif

namespace opideal {

inline bool omp_in_parallel()
{
#if defined(_OPENMP)
    return ::omp_in_parallel();
#else
    return false;
#endif
}

/// Runs f(i) for i in [begin, end). Falls back to a plain loop for
/// jobs <= 1 or when already inside a parallel region.
template <class F>
void parallel_for(long begin, long end, int jobs, F&& f)
{
    if (jobs <= 1 || omp_in_parallel()) {
        for (long i = begin; i < end; ++i) f(i);
        return;
    }
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long i = begin; i < end; ++i) f(i);
}

} // namespace opideal
