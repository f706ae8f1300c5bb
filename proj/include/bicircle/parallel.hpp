#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bicircle {

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs body(i) for i in [begin, end). Iterations must be independent; each
// index is executed exactly once by exactly one thread, so any per-index
// serial reduction inside the body is bit-reproducible across thread counts.
template <class F>
inline void parallel_for(int begin, int end, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int i = begin; i < end; ++i) body(i);
#else
  for (int i = begin; i < end; ++i) body(i);
#endif
}

}  // namespace bicircle
