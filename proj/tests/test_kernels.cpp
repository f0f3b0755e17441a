#include <doctest.h>

#include "oracles.hpp"
#include "stochascope/kernels.hpp"
#include "stochascope/threads.hpp"

using namespace stochascope;

namespace {

Matrix random_csr(std::uint64_t seed, index_t n, index_t d, double density) {
  Rng rng = Rng::stream(seed, "csr");
  std::vector<index_t> row_ptr{0};
  std::vector<index_t> cols;
  std::vector<double> vals;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < d; ++j) {
      if (rng.uniform01() < density) {
        cols.push_back(j);
        vals.push_back(rng.normal());
      }
    }
    row_ptr.push_back(static_cast<index_t>(cols.size()));
  }
  // Guarantee at least one entry so the constructor is happy.
  if (vals.empty()) {
    cols.push_back(0);
    vals.push_back(1.0);
    row_ptr.back() = 1;
  }
  return Matrix::csr(n, d, std::move(row_ptr), std::move(cols), std::move(vals));
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dense matvec: parallel kernel is bitwise identical to serial") {
  const auto op = oracles::seeded_instance(0, 40, 80);
  const Matrix& a = op.matrix;
  const auto x = oracles::random_vector(1, static_cast<std::size_t>(a.cols()));
  std::vector<double> ys(static_cast<std::size_t>(a.rows()));
  std::vector<double> yp(ys.size());
  kernels::dense_matvec_serial(a.rows(), a.cols(), a.dense_values().data(), x.data(), ys.data());
  for (int threads : {1, 2, 3, 7}) {
    set_thread_cap(threads);
    kernels::dense_matvec_parallel(a.rows(), a.cols(), a.dense_values().data(), x.data(),
                                   yp.data());
    CHECK(ys == yp);
  }
  set_thread_cap(0);
}

TEST_CASE("dense transpose matvec: parallel equals serial bitwise") {
  const auto op = oracles::seeded_instance(1, 30, 70);
  const Matrix& a = op.matrix;
  const auto y = oracles::random_vector(2, static_cast<std::size_t>(a.rows()));
  std::vector<double> xs(static_cast<std::size_t>(a.cols()));
  std::vector<double> xp(xs.size());
  kernels::dense_matvec_t_serial(a.rows(), a.cols(), a.dense_values().data(), y.data(),
                                 xs.data());
  for (int threads : {2, 5}) {
    set_thread_cap(threads);
    kernels::dense_matvec_t_parallel(a.rows(), a.cols(), a.dense_values().data(), y.data(),
                                     xp.data());
    CHECK(xs == xp);
  }
  set_thread_cap(0);
}

TEST_CASE("csr matvec: parallel equals serial bitwise") {
  const Matrix a = random_csr(7, 120, 60, 0.15);
  const auto x = oracles::random_vector(3, static_cast<std::size_t>(a.cols()));
  std::vector<double> ys(static_cast<std::size_t>(a.rows()));
  std::vector<double> yp(ys.size());
  kernels::csr_matvec_serial(a.rows(), a.row_ptr().data(), a.col_indices().data(),
                             a.values().data(), x.data(), ys.data());
  set_thread_cap(4);
  kernels::csr_matvec_parallel(a.rows(), a.row_ptr().data(), a.col_indices().data(),
                               a.values().data(), x.data(), yp.data());
  set_thread_cap(0);
  CHECK(ys == yp);
}

TEST_CASE("row norms: parallel equals serial bitwise, dense and csr") {
  const auto dense_op = oracles::seeded_instance(2, 20, 50);
  const Matrix& a = dense_op.matrix;
  std::vector<double> s(static_cast<std::size_t>(a.rows())), p(s.size());
  kernels::dense_row_norms_sq_serial(a.rows(), a.cols(), a.dense_values().data(), s.data());
  set_thread_cap(3);
  kernels::dense_row_norms_sq_parallel(a.rows(), a.cols(), a.dense_values().data(), p.data());
  set_thread_cap(0);
  CHECK(s == p);

  const Matrix c = random_csr(11, 90, 40, 0.2);
  std::vector<double> cs(static_cast<std::size_t>(c.rows())), cp(cs.size());
  kernels::csr_row_norms_sq_serial(c.rows(), c.row_ptr().data(), c.values().data(), cs.data());
  set_thread_cap(6);
  kernels::csr_row_norms_sq_parallel(c.rows(), c.row_ptr().data(), c.values().data(), cp.data());
  set_thread_cap(0);
  CHECK(cs == cp);
}

TEST_CASE("sparse_row_dot agrees with the dense dot") {
  const Matrix c = random_csr(13, 16, 24, 0.3);
  const Eigen::MatrixXd dense = c.to_eigen();
  for (index_t i = 0; i < c.rows(); ++i)
    for (index_t j = 0; j < c.rows(); ++j)
      CHECK(c.row_dot(i, j) == doctest::Approx(dense.row(i).dot(dense.row(j))).epsilon(1e-14));
}

TEST_CASE("csr transpose matvec matches the dense oracle") {
  const Matrix c = random_csr(17, 25, 35, 0.25);
  const auto y = oracles::random_vector(5, static_cast<std::size_t>(c.rows()));
  std::vector<double> x(static_cast<std::size_t>(c.cols()));
  kernels::csr_matvec_t_serial(c.rows(), c.cols(), c.row_ptr().data(), c.col_indices().data(),
                               c.values().data(), y.data(), x.data());
  const Eigen::VectorXd expect =
      c.to_eigen().transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), c.rows());
  for (index_t j = 0; j < c.cols(); ++j)
    CHECK(x[static_cast<std::size_t>(j)] == doctest::Approx(expect(j)).epsilon(1e-13));
}

}  // TEST_SUITE
