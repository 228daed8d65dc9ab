#ifndef QFACE_THREADS_HPP
#define QFACE_THREADS_HPP

namespace qface {

/// Number of threads the parallel kernels may use. Defaults to the OpenMP
/// maximum, capped by the QFACE_THREADS environment variable when set.
/// All kernels produce results that are bitwise independent of this value.
int thread_count();

/// Override the cap programmatically (tests and the benchmark use this).
/// A value <= 0 restores the environment-derived default.
void set_thread_cap(int n);

}  // namespace qface

#endif  // QFACE_THREADS_HPP
