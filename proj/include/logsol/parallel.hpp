#pragma once

// OpenMP building blocks shared by the field kernels. Small grids run serially;
// the threshold keeps thread start-up cost out of 1D desk-scale problems.

#include "logsol/exact_sum.hpp"

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logsol::par {

inline constexpr std::ptrdiff_t kParallelThreshold = 16384;

/// out[i] = f(i) for i in [0, n).
template <typename F> void map(std::ptrdiff_t n, double *out, F &&f) {
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = f(i);
}

/// Exact sum of f(i) over [0, n); identical bits for any thread count.
template <typename F> double sum(std::ptrdiff_t n, F &&f) {
  ExactSum total;
#pragma omp parallel if (n >= kParallelThreshold)
  {
    ExactSum local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i)
      local.add(f(i));
#pragma omp critical(logsol_exact_sum_merge)
    total.merge(local);
  }
  return total.value();
}

/// Several exact sums in one sweep; f(i, acc) adds into acc[0..K).
template <std::size_t K, typename F>
void sum_many(std::ptrdiff_t n, ExactSum (&totals)[K], F &&f) {
#pragma omp parallel if (n >= kParallelThreshold)
  {
    ExactSum local[K];
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i)
      f(i, local);
#pragma omp critical(logsol_exact_sum_merge)
    for (std::size_t k = 0; k < K; ++k)
      totals[k].merge(local[k]);
  }
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace logsol::par
