#include "r2f2/threads.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace r2f2 {

int thread_cap() {
    static const int cap = [] {
        const char* env = std::getenv("R2F2_THREADS");
        if (!env) return 0;
        const int v = std::atoi(env);
        return v > 0 ? v : 0;
    }();
    return cap;
}

void apply_thread_cap() {
#ifdef _OPENMP
    static const bool applied = [] {
        if (const int cap = thread_cap(); cap > 0) omp_set_num_threads(cap);
        return true;
    }();
    (void)applied;
#endif
}

}  // namespace r2f2
