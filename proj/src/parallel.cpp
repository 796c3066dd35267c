#include "rlab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <mutex>

#ifdef RLAB_FFTW_THREADS
#include <fftw3.h>
#endif

namespace rlab {

namespace {
int g_threads = 0;
std::once_flag g_once;
}  // namespace

void init_threads() {
    std::call_once(g_once, [] {
        int want = 0;
        if (const char* env = std::getenv("RESOLVENT_LAB_THREADS")) {
            want = std::atoi(env);
            if (want < 1) want = 1;
        }
        if (want > 0) omp_set_num_threads(want);
        g_threads = want > 0 ? want : omp_get_max_threads();
#ifdef RLAB_FFTW_THREADS
        fftw_init_threads();
        fftw_plan_with_nthreads(g_threads);
#endif
    });
}

int thread_count() {
    init_threads();
    return g_threads;
}

}  // namespace rlab
