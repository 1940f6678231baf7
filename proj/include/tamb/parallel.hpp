#ifndef TAMB_PARALLEL_HPP
#define TAMB_PARALLEL_HPP

#include <cstddef>

#ifdef TAMB_HAVE_OPENMP
#include <omp.h>
#endif

namespace tamb::par {

/// Global worker count for the OpenMP kernels. 1 = serial execution.
int jobs();
void set_jobs(int n);
double wall_time();

/// Index-parallel map. Results must be written to disjoint slots by index so
/// serial and parallel runs produce identical output.
template <class F>
void for_index(std::size_t n, F&& f) {
#ifdef TAMB_HAVE_OPENMP
    if (jobs() > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs())
        for (long long i = 0; i < (long long)n; ++i) f((std::size_t)i);
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

/// Serial reference for the same kernel shape; kept for differential tests
/// and the benchmark target.
template <class F>
void for_index_serial(std::size_t n, F&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

} // namespace tamb::par

#endif
