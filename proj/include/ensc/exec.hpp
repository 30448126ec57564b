#ifndef ENSC_EXEC_HPP
#define ENSC_EXEC_HPP

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ensc {

/// Execution policy for the data-parallel kernels. Per-sample work
/// (projections, kernel assembly, simulation) is independent across the
/// ensemble and runs under OpenMP when `parallel` is selected. Results are
/// written to per-index slots and reduced in index order, so serial and
/// parallel runs produce identical bits.
enum class Exec { serial, parallel };

/// Runs body(i) for i in [0, count). The body must only write to state
/// owned by index i. An exception thrown by any index is captured and
/// rethrown on the calling thread (lowest throwing index wins).
template <typename Body>
void for_each_index(Exec exec, std::size_t count, const Body& body) {
#ifdef _OPENMP
    if (exec == Exec::parallel) {
        std::exception_ptr error;
        long long error_index = -1;
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                #pragma omp critical(ensc_for_each_error)
                {
                    if (error_index < 0 || i < error_index) {
                        error = std::current_exception();
                        error_index = i;
                    }
                }
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    (void)exec;
    for (std::size_t i = 0; i < count; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace ensc

#endif
