#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nqueens {

/// Number of worker threads used by the mat-vec kernels. Defaults to 1, which
/// gives bit-reproducible results; any fixed value is also deterministic.
inline int& thread_count_storage() {
  static int count = 1;
  return count;
}

inline int thread_count() { return thread_count_storage(); }

inline void set_thread_count(int count) {
  thread_count_storage() = count < 1 ? 1 : count;
#ifdef _OPENMP
  omp_set_num_threads(thread_count_storage());
#endif
}

}  // namespace nqueens
