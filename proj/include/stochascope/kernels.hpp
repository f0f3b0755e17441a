#pragma once

#include <cstdint>
#include <vector>

namespace stochascope {

using index_t = std::int64_t;

// Low-level matrix kernels. Every kernel comes in a _serial reference
// version and a _parallel OpenMP version; the unsuffixed wrapper dispatches
// by problem size and the effective thread count. The parallel versions are
// written so each output element is produced by exactly one thread with the
// same summation order as the serial code, so serial and parallel results
// are bitwise identical for any thread count.
namespace kernels {

// y = A x, A dense row-major n x d.
void dense_matvec_serial(index_t n, index_t d, const double* a, const double* x, double* y);
void dense_matvec_parallel(index_t n, index_t d, const double* a, const double* x, double* y);
void dense_matvec(index_t n, index_t d, const double* a, const double* x, double* y);

// x = A^T y, A dense row-major n x d.
void dense_matvec_t_serial(index_t n, index_t d, const double* a, const double* y, double* x);
void dense_matvec_t_parallel(index_t n, index_t d, const double* a, const double* y, double* x);
void dense_matvec_t(index_t n, index_t d, const double* a, const double* y, double* x);

// y = A x, A in CSR form.
void csr_matvec_serial(index_t n, const index_t* row_ptr, const index_t* cols,
                       const double* vals, const double* x, double* y);
void csr_matvec_parallel(index_t n, const index_t* row_ptr, const index_t* cols,
                         const double* vals, const double* x, double* y);
void csr_matvec(index_t n, const index_t* row_ptr, const index_t* cols, const double* vals,
                const double* x, double* y);

// x = A^T y for CSR. Scatter-based; kept serial so results do not depend on
// the thread count.
void csr_matvec_t_serial(index_t n, index_t d, const index_t* row_ptr, const index_t* cols,
                         const double* vals, const double* y, double* x);

// Squared euclidean norms of all rows.
void dense_row_norms_sq_serial(index_t n, index_t d, const double* a, double* out);
void dense_row_norms_sq_parallel(index_t n, index_t d, const double* a, double* out);
void csr_row_norms_sq_serial(index_t n, const index_t* row_ptr, const double* vals, double* out);
void csr_row_norms_sq_parallel(index_t n, const index_t* row_ptr, const double* vals,
                               double* out);

// Dot product of two sorted sparse rows (two-pointer merge).
double sparse_row_dot(const index_t* cols_a, const double* vals_a, index_t len_a,
                      const index_t* cols_b, const double* vals_b, index_t len_b);

}  // namespace kernels
}  // namespace stochascope
