#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "stochascope/kernels.hpp"

namespace stochascope {

// A real n x d matrix, stored dense row-major or as compressed sparse rows.
// Immutable after construction; safe to share across threads. CSR rows keep
// strictly increasing column indices and never store explicit zeros.
class Matrix {
 public:
  static Matrix dense(index_t n, index_t d, std::vector<double> values);
  static Matrix csr(index_t n, index_t d, std::vector<index_t> row_ptr,
                    std::vector<index_t> cols, std::vector<double> vals);
  static Matrix identity(index_t n);
  static Matrix from_eigen(const Eigen::MatrixXd& m);

  index_t rows() const { return n_; }
  index_t cols() const { return d_; }
  bool is_dense() const { return dense_; }
  index_t nnz() const { return dense_ ? n_ * d_ : static_cast<index_t>(vals_.size()); }

  double at(index_t i, index_t j) const;

  // y = A x and x = A^T y. Spans must have the right extent.
  void matvec(std::span<const double> x, std::span<double> y) const;
  void matvec_t(std::span<const double> y, std::span<double> x) const;
  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_t(std::span<const double> y) const;

  double row_dot(index_t i, index_t j) const;
  double row_norm_sq(index_t i) const;
  std::vector<double> row_norms_sq() const;
  double frobenius_norm_sq() const;

  Matrix subset_rows(std::span<const index_t> rows) const;
  Matrix transpose() const;
  Matrix scaled(double c) const;

  Eigen::MatrixXd to_eigen() const;

  // CSR internals (dense matrices return empty spans).
  std::span<const index_t> row_ptr() const { return row_ptr_; }
  std::span<const index_t> col_indices() const { return cols_; }
  std::span<const double> values() const { return vals_; }
  std::span<const double> dense_values() const { return vals_; }

 private:
  Matrix(index_t n, index_t d, bool dense) : n_(n), d_(d), dense_(dense) {}

  index_t n_ = 0;
  index_t d_ = 0;
  bool dense_ = true;
  std::vector<double> vals_;     // dense: n*d row-major; csr: nnz values
  std::vector<index_t> cols_;    // csr only
  std::vector<index_t> row_ptr_; // csr only, length n+1
};

}  // namespace stochascope
