#include "qface/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qface {

namespace {

int env_cap() {
    const char* v = std::getenv("QFACE_THREADS");
    if (!v || !*v) return 0;
    try {
        int n = std::stoi(v);
        return n > 0 ? n : 1;
    } catch (const std::exception&) {
        return 0;
    }
}

int g_cap = -1;  // -1: uninitialized, 0: no cap

}  // namespace

void set_thread_cap(int n) { g_cap = n > 0 ? n : -1; }

int thread_count() {
#ifdef _OPENMP
    if (g_cap < 0) g_cap = env_cap();
    int n = omp_get_max_threads();
    if (g_cap > 0 && g_cap < n) n = g_cap;
    return n > 0 ? n : 1;
#else
    return 1;
#endif
}

}  // namespace qface
