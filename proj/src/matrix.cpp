#include "stochascope/matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "stochascope/threads.hpp"

namespace stochascope {

namespace {

void check_shape(index_t n, index_t d) {
  if (n < 1 || d < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
}

}  // namespace

Matrix Matrix::dense(index_t n, index_t d, std::vector<double> values) {
  check_shape(n, d);
  if (static_cast<index_t>(values.size()) != n * d)
    throw std::invalid_argument("dense value count does not match n*d");
  Matrix m(n, d, true);
  m.vals_ = std::move(values);
  return m;
}

Matrix Matrix::csr(index_t n, index_t d, std::vector<index_t> row_ptr,
                   std::vector<index_t> cols, std::vector<double> vals) {
  check_shape(n, d);
  if (static_cast<index_t>(row_ptr.size()) != n + 1)
    throw std::invalid_argument("row_ptr must have n+1 entries");
  if (row_ptr.front() != 0 || cols.size() != vals.size() ||
      row_ptr.back() != static_cast<index_t>(cols.size()))
    throw std::invalid_argument("inconsistent CSR arrays");
  for (index_t i = 0; i < n; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw std::invalid_argument("row_ptr not nondecreasing");
    for (index_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      if (cols[p] < 0 || cols[p] >= d) throw std::invalid_argument("column index out of range");
      if (p > row_ptr[i] && cols[p] <= cols[p - 1])
        throw std::invalid_argument("column indices must be strictly increasing per row");
      if (vals[p] == 0.0) throw std::invalid_argument("explicit zeros are not stored");
    }
  }
  Matrix m(n, d, false);
  m.row_ptr_ = std::move(row_ptr);
  m.cols_ = std::move(cols);
  m.vals_ = std::move(vals);
  return m;
}

Matrix Matrix::identity(index_t n) {
  std::vector<index_t> row_ptr(n + 1), cols(n);
  std::vector<double> vals(n, 1.0);
  for (index_t i = 0; i <= n; ++i) row_ptr[i] = i;
  for (index_t i = 0; i < n; ++i) cols[i] = i;
  return csr(n, n, std::move(row_ptr), std::move(cols), std::move(vals));
}

Matrix Matrix::from_eigen(const Eigen::MatrixXd& m) {
  const index_t n = m.rows(), d = m.cols();
  std::vector<double> vals(static_cast<std::size_t>(n * d));
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < d; ++j) vals[static_cast<std::size_t>(i * d + j)] = m(i, j);
  return dense(n, d, std::move(vals));
}

double Matrix::at(index_t i, index_t j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= d_) throw std::out_of_range("matrix index");
  if (dense_) return vals_[static_cast<std::size_t>(i * d_ + j)];
  const auto begin = cols_.begin() + row_ptr_[i];
  const auto end = cols_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

void Matrix::matvec(std::span<const double> x, std::span<double> y) const {
  if (static_cast<index_t>(x.size()) != d_ || static_cast<index_t>(y.size()) != n_)
    throw std::invalid_argument("matvec extent mismatch");
  if (dense_)
    kernels::dense_matvec(n_, d_, vals_.data(), x.data(), y.data());
  else
    kernels::csr_matvec(n_, row_ptr_.data(), cols_.data(), vals_.data(), x.data(), y.data());
}

void Matrix::matvec_t(std::span<const double> y, std::span<double> x) const {
  if (static_cast<index_t>(y.size()) != n_ || static_cast<index_t>(x.size()) != d_)
    throw std::invalid_argument("matvec_t extent mismatch");
  if (dense_)
    kernels::dense_matvec_t(n_, d_, vals_.data(), y.data(), x.data());
  else
    kernels::csr_matvec_t_serial(n_, d_, row_ptr_.data(), cols_.data(), vals_.data(), y.data(),
                                 x.data());
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(n_));
  matvec(x, y);
  return y;
}

std::vector<double> Matrix::apply_t(std::span<const double> y) const {
  std::vector<double> x(static_cast<std::size_t>(d_));
  matvec_t(y, x);
  return x;
}

double Matrix::row_dot(index_t i, index_t j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("row index");
  if (dense_) {
    const double* a = vals_.data() + i * d_;
    const double* b = vals_.data() + j * d_;
    double acc = 0.0;
    for (index_t k = 0; k < d_; ++k) acc += a[k] * b[k];
    return acc;
  }
  return kernels::sparse_row_dot(cols_.data() + row_ptr_[i], vals_.data() + row_ptr_[i],
                                 row_ptr_[i + 1] - row_ptr_[i], cols_.data() + row_ptr_[j],
                                 vals_.data() + row_ptr_[j], row_ptr_[j + 1] - row_ptr_[j]);
}

double Matrix::row_norm_sq(index_t i) const { return row_dot(i, i); }

std::vector<double> Matrix::row_norms_sq() const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  const bool par = nnz() >= (1 << 15) && effective_threads() > 1;
  if (dense_) {
    if (par)
      kernels::dense_row_norms_sq_parallel(n_, d_, vals_.data(), out.data());
    else
      kernels::dense_row_norms_sq_serial(n_, d_, vals_.data(), out.data());
  } else {
    if (par)
      kernels::csr_row_norms_sq_parallel(n_, row_ptr_.data(), vals_.data(), out.data());
    else
      kernels::csr_row_norms_sq_serial(n_, row_ptr_.data(), vals_.data(), out.data());
  }
  return out;
}

double Matrix::frobenius_norm_sq() const {
  double acc = 0.0;
  for (double v : vals_) acc += v * v;
  return acc;
}

Matrix Matrix::subset_rows(std::span<const index_t> rows) const {
  if (rows.empty()) throw std::invalid_argument("row subset must be nonempty");
  for (index_t r : rows)
    if (r < 0 || r >= n_) throw std::out_of_range("row subset index out of range");
  const index_t m = static_cast<index_t>(rows.size());
  if (dense_) {
    std::vector<double> vals(static_cast<std::size_t>(m * d_));
    for (index_t i = 0; i < m; ++i)
      std::copy_n(vals_.data() + rows[i] * d_, d_, vals.data() + i * d_);
    return dense(m, d_, std::move(vals));
  }
  std::vector<index_t> row_ptr(m + 1, 0);
  for (index_t i = 0; i < m; ++i)
    row_ptr[i + 1] = row_ptr[i] + (row_ptr_[rows[i] + 1] - row_ptr_[rows[i]]);
  std::vector<index_t> cols(static_cast<std::size_t>(row_ptr[m]));
  std::vector<double> vals(static_cast<std::size_t>(row_ptr[m]));
  for (index_t i = 0; i < m; ++i) {
    const index_t src = row_ptr_[rows[i]], len = row_ptr_[rows[i] + 1] - src;
    std::copy_n(cols_.data() + src, len, cols.data() + row_ptr[i]);
    std::copy_n(vals_.data() + src, len, vals.data() + row_ptr[i]);
  }
  return csr(m, d_, std::move(row_ptr), std::move(cols), std::move(vals));
}

Matrix Matrix::transpose() const {
  if (dense_) {
    std::vector<double> vals(static_cast<std::size_t>(n_ * d_));
    for (index_t i = 0; i < n_; ++i)
      for (index_t j = 0; j < d_; ++j)
        vals[static_cast<std::size_t>(j * n_ + i)] = vals_[static_cast<std::size_t>(i * d_ + j)];
    return dense(d_, n_, std::move(vals));
  }
  // Counting sort by column.
  std::vector<index_t> row_ptr(d_ + 1, 0);
  for (index_t c : cols_) ++row_ptr[c + 1];
  for (index_t j = 0; j < d_; ++j) row_ptr[j + 1] += row_ptr[j];
  std::vector<index_t> cols(vals_.size());
  std::vector<double> vals(vals_.size());
  std::vector<index_t> cursor(row_ptr.begin(), row_ptr.end() - 1);
  for (index_t i = 0; i < n_; ++i) {
    for (index_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const index_t dst = cursor[cols_[p]]++;
      cols[static_cast<std::size_t>(dst)] = i;
      vals[static_cast<std::size_t>(dst)] = vals_[static_cast<std::size_t>(p)];
    }
  }
  return csr(d_, n_, std::move(row_ptr), std::move(cols), std::move(vals));
}

Matrix Matrix::scaled(double c) const {
  if (c == 0.0 && !dense_) throw std::invalid_argument("scaling a sparse matrix by zero");
  Matrix m = *this;
  for (double& v : m.vals_) v *= c;
  return m;
}

Eigen::MatrixXd Matrix::to_eigen() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, d_);
  if (dense_) {
    for (index_t i = 0; i < n_; ++i)
      for (index_t j = 0; j < d_; ++j) m(i, j) = vals_[static_cast<std::size_t>(i * d_ + j)];
  } else {
    for (index_t i = 0; i < n_; ++i)
      for (index_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
        m(i, cols_[static_cast<std::size_t>(p)]) = vals_[static_cast<std::size_t>(p)];
  }
  return m;
}

}  // namespace stochascope
