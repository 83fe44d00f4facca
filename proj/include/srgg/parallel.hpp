#pragma once

// Thin OpenMP shim so the library builds and runs identically (on one
// thread) when the compiler has no OpenMP support.

#ifdef _OPENMP
#include <omp.h>
#else
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

namespace srgg {

inline int max_threads() { return omp_get_max_threads(); }

// Caps the worker pool; n <= 0 leaves the runtime default untouched.
inline void set_thread_cap(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace srgg
