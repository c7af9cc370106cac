#pragma once

#include <cstddef>

#include "sbopt/model.hpp"
#include "sbopt/parallel.hpp"

// Internal dense kernels. The dot product uses eight fixed accumulator lanes
// combined in a fixed order, so results are identical for any worker count
// (parallelism is across rows only, never inside a row).

namespace sbopt::detail {

inline double row_dot(const double* a, const double* b, std::size_t n) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  double acc4 = 0.0, acc5 = 0.0, acc6 = 0.0, acc7 = 0.0;
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    acc0 += a[j + 0] * b[j + 0];
    acc1 += a[j + 1] * b[j + 1];
    acc2 += a[j + 2] * b[j + 2];
    acc3 += a[j + 3] * b[j + 3];
    acc4 += a[j + 4] * b[j + 4];
    acc5 += a[j + 5] * b[j + 5];
    acc6 += a[j + 6] * b[j + 6];
    acc7 += a[j + 7] * b[j + 7];
  }
  for (; j < n; ++j) acc0 += a[j] * b[j];
  return ((acc0 + acc1) + (acc2 + acc3)) + ((acc4 + acc5) + (acc6 + acc7));
}

// out_i = sum_j J_ij v_j, parallel over rows when a pool is given.
inline void coupling_matvec(const IsingInstance& instance, const double* v, double* out,
                            ThreadPool* pool) {
  const std::size_t n = instance.n();
  auto rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = row_dot(instance.row(i).data(), v, n);
    }
  };
  if (pool != nullptr && pool->workers() > 1) {
    pool->for_chunks(n, rows);
  } else {
    rows(0, n);
  }
}

}  // namespace sbopt::detail
