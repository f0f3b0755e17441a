#include "stochascope/kernels.hpp"

#include "stochascope/threads.hpp"

namespace stochascope::kernels {

namespace {
// Below this many floating point operations the parallel launch is not worth it.
constexpr index_t kParallelCutoff = 1 << 15;
}  // namespace

void dense_matvec_serial(index_t n, index_t d, const double* a, const double* x, double* y) {
  for (index_t i = 0; i < n; ++i) {
    const double* row = a + i * d;
    double acc = 0.0;
    for (index_t j = 0; j < d; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void dense_matvec_parallel(index_t n, index_t d, const double* a, const double* x, double* y) {
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (index_t i = 0; i < n; ++i) {
    const double* row = a + i * d;
    double acc = 0.0;
    for (index_t j = 0; j < d; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void dense_matvec(index_t n, index_t d, const double* a, const double* x, double* y) {
  if (n * d >= kParallelCutoff && effective_threads() > 1)
    dense_matvec_parallel(n, d, a, x, y);
  else
    dense_matvec_serial(n, d, a, x, y);
}

void dense_matvec_t_serial(index_t n, index_t d, const double* a, const double* y, double* x) {
  // Column-wise accumulation: each x[j] sums rows in index order, matching
  // the parallel kernel exactly.
  for (index_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (index_t i = 0; i < n; ++i) acc += a[i * d + j] * y[i];
    x[j] = acc;
  }
}

void dense_matvec_t_parallel(index_t n, index_t d, const double* a, const double* y, double* x) {
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (index_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (index_t i = 0; i < n; ++i) acc += a[i * d + j] * y[i];
    x[j] = acc;
  }
}

void dense_matvec_t(index_t n, index_t d, const double* a, const double* y, double* x) {
  if (n * d >= kParallelCutoff && effective_threads() > 1)
    dense_matvec_t_parallel(n, d, a, y, x);
  else
    dense_matvec_t_serial(n, d, a, y, x);
}

void csr_matvec_serial(index_t n, const index_t* row_ptr, const index_t* cols,
                       const double* vals, const double* x, double* y) {
  for (index_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (index_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) acc += vals[p] * x[cols[p]];
    y[i] = acc;
  }
}

void csr_matvec_parallel(index_t n, const index_t* row_ptr, const index_t* cols,
                         const double* vals, const double* x, double* y) {
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (index_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (index_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) acc += vals[p] * x[cols[p]];
    y[i] = acc;
  }
}

void csr_matvec(index_t n, const index_t* row_ptr, const index_t* cols, const double* vals,
                const double* x, double* y) {
  if (row_ptr[n] >= kParallelCutoff && effective_threads() > 1)
    csr_matvec_parallel(n, row_ptr, cols, vals, x, y);
  else
    csr_matvec_serial(n, row_ptr, cols, vals, x, y);
}

void csr_matvec_t_serial(index_t n, index_t d, const index_t* row_ptr, const index_t* cols,
                         const double* vals, const double* y, double* x) {
  for (index_t j = 0; j < d; ++j) x[j] = 0.0;
  for (index_t i = 0; i < n; ++i) {
    const double yi = y[i];
    for (index_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) x[cols[p]] += vals[p] * yi;
  }
}

void dense_row_norms_sq_serial(index_t n, index_t d, const double* a, double* out) {
  for (index_t i = 0; i < n; ++i) {
    const double* row = a + i * d;
    double acc = 0.0;
    for (index_t j = 0; j < d; ++j) acc += row[j] * row[j];
    out[i] = acc;
  }
}

void dense_row_norms_sq_parallel(index_t n, index_t d, const double* a, double* out) {
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (index_t i = 0; i < n; ++i) {
    const double* row = a + i * d;
    double acc = 0.0;
    for (index_t j = 0; j < d; ++j) acc += row[j] * row[j];
    out[i] = acc;
  }
}

void csr_row_norms_sq_serial(index_t n, const index_t* row_ptr, const double* vals, double* out) {
  for (index_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (index_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) acc += vals[p] * vals[p];
    out[i] = acc;
  }
}

void csr_row_norms_sq_parallel(index_t n, const index_t* row_ptr, const double* vals,
                               double* out) {
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (index_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (index_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) acc += vals[p] * vals[p];
    out[i] = acc;
  }
}

double sparse_row_dot(const index_t* cols_a, const double* vals_a, index_t len_a,
                      const index_t* cols_b, const double* vals_b, index_t len_b) {
  double acc = 0.0;
  index_t pa = 0, pb = 0;
  while (pa < len_a && pb < len_b) {
    const index_t ca = cols_a[pa], cb = cols_b[pb];
    if (ca == cb) {
      acc += vals_a[pa] * vals_b[pb];
      ++pa;
      ++pb;
    } else if (ca < cb) {
      ++pa;
    } else {
      ++pb;
    }
  }
  return acc;
}

}  // namespace stochascope::kernels
