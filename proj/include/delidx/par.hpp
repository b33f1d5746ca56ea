#pragma once

#include <atomic>
#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace delidx::par {

// Process-wide worker cap. 0 = use the OpenMP default, 1 = serial reference path.
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{0};
    return cap;
}

inline void set_max_threads(int n) { thread_cap() = n < 0 ? 0 : n; }

inline int max_threads() {
    int cap = thread_cap();
#ifdef _OPENMP
    int hw = omp_get_max_threads();
    return cap == 0 ? hw : (cap < hw ? cap : hw);
#else
    return cap == 0 ? 1 : 1;
#endif
}

// Runs body(i) for i in [0, n). Iterations must be independent and should write
// results into preallocated slots, so output is identical for any thread count.
// Exceptions are captured and the first one rethrown after the loop joins.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    if (n == 0) return;
#ifdef _OPENMP
    const int jobs = max_threads();
    if (jobs > 1 && n > 1) {
        std::exception_ptr err = nullptr;
        std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(delidx_par_err)
                {
                    if (!err) err = std::current_exception();
                }
                failed = true;
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace delidx::par
