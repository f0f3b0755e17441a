#pragma once

#include <filesystem>

#include "stochascope/matrix.hpp"

namespace stochascope {

// Matrix Market I/O. Supported headers are exactly
//   %%MatrixMarket matrix coordinate real general
//   %%MatrixMarket matrix array real general
// Anything else raises ParseError; so do duplicate coordinate entries (no
// implicit summation), bad indices, and dimension mismatches. Coordinate
// files load as CSR (explicitly stored zeros are dropped), array files as
// dense. File indices are 1-based; in memory everything is 0-based.
Matrix read_matrix_market(const std::filesystem::path& path);

// Writes CSR matrices in coordinate format and dense ones in array format,
// with enough digits that read-back reproduces every value exactly.
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);

// Vectors travel as d x 1 array files.
std::vector<double> read_vector_market(const std::filesystem::path& path);
void write_vector_market(const std::filesystem::path& path, std::span<const double> v);

}  // namespace stochascope
