#include <doctest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "stochascope/matrix.hpp"

using namespace stochascope;

TEST_SUITE("matrix") {

TEST_CASE("csr construction enforces the storage invariants") {
  CHECK_THROWS_AS(Matrix::dense(0, 3, {}), std::invalid_argument);
  // Column indices must be strictly increasing per row.
  CHECK_THROWS_AS(Matrix::csr(1, 3, {0, 2}, {1, 1}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Matrix::csr(1, 3, {0, 2}, {2, 1}, {1.0, 2.0}), std::invalid_argument);
  // No explicit zeros.
  CHECK_THROWS_AS(Matrix::csr(1, 2, {0, 1}, {0}, {0.0}), std::invalid_argument);
  // Out-of-range column.
  CHECK_THROWS_AS(Matrix::csr(1, 2, {0, 1}, {2}, {1.0}), std::invalid_argument);
  CHECK_NOTHROW(Matrix::csr(2, 3, {0, 2, 3}, {0, 2, 1}, {1.0, 2.0, 3.0}));
}

TEST_CASE("identity behaves like the identity") {
  const Matrix id = Matrix::identity(5);
  CHECK(id.nnz() == 5);
  const auto x = oracles::random_vector(21, 5);
  CHECK(id.apply(x) == x);
  CHECK(id.apply_t(x) == x);
  CHECK(id.at(2, 2) == 1.0);
  CHECK(id.at(2, 3) == 0.0);
}

TEST_CASE("matvec and transpose matvec match Eigen on mixed instances") {
  const auto op = oracles::seeded_instance(3, 6, 14);
  const Matrix& a = op.matrix;
  const Eigen::MatrixXd e = a.to_eigen();
  const auto x = oracles::random_vector(8, static_cast<std::size_t>(a.cols()));
  const auto y = oracles::random_vector(9, static_cast<std::size_t>(a.rows()));
  const auto ax = a.apply(x);
  const auto aty = a.apply_t(y);
  const Eigen::VectorXd eax = e * Eigen::Map<const Eigen::VectorXd>(x.data(), a.cols());
  const Eigen::VectorXd eaty =
      e.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), a.rows());
  for (index_t i = 0; i < a.rows(); ++i)
    CHECK(ax[static_cast<std::size_t>(i)] == doctest::Approx(eax(i)).epsilon(1e-13));
  for (index_t j = 0; j < a.cols(); ++j)
    CHECK(aty[static_cast<std::size_t>(j)] == doctest::Approx(eaty(j)).epsilon(1e-13));
}

TEST_CASE("adjoint identity <Ax, y> = <x, A^T y>") {
  for (int i = 0; i < 8; ++i) {
    const auto op = oracles::seeded_instance(i, 4, 20);
    const Matrix& a = op.matrix;
    const auto x = oracles::random_vector(40 + static_cast<std::uint64_t>(i),
                                          static_cast<std::size_t>(a.cols()));
    const auto y = oracles::random_vector(50 + static_cast<std::uint64_t>(i),
                                          static_cast<std::size_t>(a.rows()));
    const auto ax = a.apply(x);
    const auto aty = a.apply_t(y);
    double lhs = 0.0, rhs = 0.0;
    for (index_t r = 0; r < a.rows(); ++r)
      lhs += ax[static_cast<std::size_t>(r)] * y[static_cast<std::size_t>(r)];
    for (index_t c = 0; c < a.cols(); ++c)
      rhs += x[static_cast<std::size_t>(c)] * aty[static_cast<std::size_t>(c)];
    CHECK(oracles::rel_close(lhs, rhs, 1e-12));
  }
}

TEST_CASE("subset_rows extracts exactly the requested rows") {
  const auto op = oracles::seeded_instance(4, 8, 16);
  const Matrix& a = op.matrix;
  const std::vector<index_t> pick = {3, 0, 5};
  const Matrix sub = a.subset_rows(pick);
  REQUIRE(sub.rows() == 3);
  for (index_t i = 0; i < 3; ++i)
    for (index_t j = 0; j < a.cols(); ++j)
      CHECK(sub.at(i, j) == a.at(pick[static_cast<std::size_t>(i)], j));
  CHECK_THROWS_AS((void)a.subset_rows(std::vector<index_t>{a.rows()}), std::out_of_range);
  CHECK_THROWS_AS((void)a.subset_rows(std::vector<index_t>{}), std::invalid_argument);
}

TEST_CASE("transpose round-trips and matches entrywise") {
  const Matrix sparse = Matrix::csr(3, 2, {0, 1, 2, 3}, {1, 0, 1}, {2.0, -1.0, 4.0});
  const Matrix t = sparse.transpose();
  REQUIRE(t.rows() == 2);
  REQUIRE(t.cols() == 3);
  for (index_t i = 0; i < 3; ++i)
    for (index_t j = 0; j < 2; ++j) CHECK(t.at(j, i) == sparse.at(i, j));
  const Matrix tt = t.transpose();
  for (index_t i = 0; i < 3; ++i)
    for (index_t j = 0; j < 2; ++j) CHECK(tt.at(i, j) == sparse.at(i, j));
}

TEST_CASE("frobenius and row norms agree with the definition") {
  const auto op = oracles::seeded_instance(6, 5, 12);
  const Matrix& a = op.matrix;
  const auto norms = a.row_norms_sq();
  double total = 0.0;
  for (index_t i = 0; i < a.rows(); ++i) {
    CHECK(norms[static_cast<std::size_t>(i)] == doctest::Approx(a.row_dot(i, i)));
    total += norms[static_cast<std::size_t>(i)];
  }
  CHECK(a.frobenius_norm_sq() == doctest::Approx(total).epsilon(1e-13));
}

TEST_CASE("scaled multiplies every entry") {
  const Matrix m = Matrix::csr(2, 2, {0, 1, 2}, {0, 1}, {3.0, -2.0});
  const Matrix s = m.scaled(-0.5);
  CHECK(s.at(0, 0) == -1.5);
  CHECK(s.at(1, 1) == 1.0);
}

}  // TEST_SUITE
