#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "stochascope/error.hpp"
#include "stochascope/matrix_market.hpp"

using namespace stochascope;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE("matrix_market") {

TEST_CASE("coordinate identity parses") {
  const auto path = temp_file("mm_id2.mtx",
                              "%%MatrixMarket matrix coordinate real general\n"
                              "2 2 2\n"
                              "1 1 1.0\n"
                              "2 2 1.0\n");
  const Matrix m = read_matrix_market(path);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 1.0);
  CHECK(m.at(0, 1) == 0.0);
  CHECK_FALSE(m.is_dense());
}

TEST_CASE("unsupported header qualifiers are rejected") {
  for (const char* header : {
           "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n",
           "%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 1\n",
           "%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 1\n",
           "%%MatrixMarket matrix array real symmetric\n1 1\n1\n",
           "%%MatrixMarket vector coordinate real general\n1 1 1\n1 1 1\n",
       }) {
    const auto path = temp_file("mm_bad.mtx", header);
    CHECK_THROWS_AS((void)read_matrix_market(path), ParseError);
  }
}

TEST_CASE("duplicate entries are an error, not a sum") {
  const auto path = temp_file("mm_dup.mtx",
                              "%%MatrixMarket matrix coordinate real general\n"
                              "2 2 2\n"
                              "1 1 1.0\n"
                              "1 1 2.0\n");
  CHECK_THROWS_AS((void)read_matrix_market(path), ParseError);
}

TEST_CASE("parse errors carry the offending line") {
  const auto path = temp_file("mm_badline.mtx",
                              "%%MatrixMarket matrix coordinate real general\n"
                              "2 2 2\n"
                              "1 1 1.0\n"
                              "oops\n");
  try {
    (void)read_matrix_market(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("out-of-range indices are rejected") {
  const auto path = temp_file("mm_range.mtx",
                              "%%MatrixMarket matrix coordinate real general\n"
                              "2 2 1\n"
                              "3 1 1.0\n");
  CHECK_THROWS_AS((void)read_matrix_market(path), ParseError);
}

TEST_CASE("sparse and dense round-trips are exact") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto op = oracles::seeded_instance(5, 6, 12);
  write_matrix_market(dir / "mm_rt_dense.mtx", op.matrix);
  const Matrix back = read_matrix_market(dir / "mm_rt_dense.mtx");
  REQUIRE(back.rows() == op.matrix.rows());
  REQUIRE(back.cols() == op.matrix.cols());
  for (index_t i = 0; i < back.rows(); ++i)
    for (index_t j = 0; j < back.cols(); ++j) CHECK(back.at(i, j) == op.matrix.at(i, j));

  const auto blur = build_space_varying_blur({6, 6, 0.0, 2.0});
  write_matrix_market(dir / "mm_rt_sparse.mtx", blur.matrix);
  const Matrix sback = read_matrix_market(dir / "mm_rt_sparse.mtx");
  REQUIRE(sback.nnz() == blur.matrix.nnz());
  for (index_t i = 0; i < sback.rows(); ++i)
    for (index_t j = 0; j < sback.cols(); ++j) CHECK(sback.at(i, j) == blur.matrix.at(i, j));
}

TEST_CASE("explicit zeros in a file are dropped from storage") {
  const auto path = temp_file("mm_zero.mtx",
                              "%%MatrixMarket matrix coordinate real general\n"
                              "2 2 2\n"
                              "1 1 0.0\n"
                              "2 1 3.0\n");
  const Matrix m = read_matrix_market(path);
  CHECK(m.nnz() == 1);
  CHECK(m.at(1, 0) == 3.0);
}

TEST_CASE("vector round-trip through array format") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto v = oracles::random_vector(31, 9);
  write_vector_market(dir / "mm_vec.mtx", v);
  CHECK(read_vector_market(dir / "mm_vec.mtx") == v);
}

TEST_CASE("array format loads dense in column-major order") {
  const auto path = temp_file("mm_arr.mtx",
                              "%%MatrixMarket matrix array real general\n"
                              "2 2\n"
                              "1\n2\n3\n4\n");
  const Matrix m = read_matrix_market(path);
  CHECK(m.is_dense());
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 0) == 2.0);
  CHECK(m.at(0, 1) == 3.0);
  CHECK(m.at(1, 1) == 4.0);
}

}  // TEST_SUITE
