#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eegkit {

// Thread-count control for the parallel kernels (filtering, PSD, permutation
// loops). Compiles to a no-op when OpenMP is unavailable so callers never need
// to guard on _OPENMP themselves.
inline void set_max_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace eegkit
