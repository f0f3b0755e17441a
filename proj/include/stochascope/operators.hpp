#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "stochascope/matrix.hpp"

namespace stochascope {

// The measurement operator A of b = A x + w, with an optional pixel grid
// attached when columns index image pixels (column-major vectorization:
// pixel (i, j) of a d1 x d2 image maps to index j*d1 + i).
struct ForwardOperator {
  Matrix matrix;
  std::string label;
  std::optional<std::pair<index_t, index_t>> image_shape;  // (d1, d2)

  ForwardOperator(Matrix m, std::string lab,
                  std::optional<std::pair<index_t, index_t>> shape = std::nullopt);
};

// Space-varying out-of-focus blur: row i is the vectorized normalized disk
// PSF centered at pixel i. Disk radius grows linearly with the pixel's
// euclidean distance from the image center, from r_min at the center to
// r_max at the corner. A pixel belongs to the disk iff its center lies
// within the radius (ties included). Kernels truncated at the boundary are
// renormalized so every row sums to one.
struct BlurSpec {
  index_t d1 = 0;
  index_t d2 = 0;
  double r_min = 0.0;
  double r_max = 0.0;
};

ForwardOperator build_space_varying_blur(const BlurSpec& spec);

enum class EnsembleKind {
  kGaussian,           // i.i.d. mean/var entries
  kUniform01,          // i.i.d. uniform [0, 1)
  kSubsampledWishart,  // n rows of G^T G / sqrt(d), G a seeded d x d standard gaussian
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kGaussian;
  double mean = 0.0;  // gaussian only
  double var = 1.0;   // gaussian only
};

// Deterministic per seed: entries are drawn row-major from a single stream.
ForwardOperator build_random_ensemble(const EnsembleSpec& spec, index_t n, index_t d,
                                      std::uint64_t seed);

// Anisotropic forward-difference operator on a d1 x d2 pixel grid,
// r = d1*(d2-1) horizontal rows (x_{i,j+1} - x_{i,j}) followed by
// (d1-1)*d2 vertical rows (x_{i+1,j} - x_{i,j}).
Matrix diff_operator(index_t d1, index_t d2);

ForwardOperator load_matrix_market(const std::filesystem::path& path);

}  // namespace stochascope
