#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hetsched {

/// Execution policy for the embarrassingly parallel drivers (assignment
/// enumeration, verification suites, fuzz sweeps). The serial path is the
/// reference implementation; the OpenMP path must produce identical results,
/// which the test suite checks.
enum class Exec { Serial, Parallel };

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs f(i) for i in [0, n). With Exec::Parallel the iterations are spread
/// over OpenMP threads; callers must make f(i) write only to slot i of
/// preallocated output so results do not depend on scheduling order.
/// The first exception thrown by any iteration is rethrown on the caller.
template <typename F>
void parallel_for(std::int64_t n, Exec exec, F&& f) {
    if (exec == Exec::Serial) {
        for (std::int64_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace hetsched
