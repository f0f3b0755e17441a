#include "stochascope/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "stochascope/matrix_market.hpp"
#include "stochascope/rng.hpp"

namespace stochascope {

ForwardOperator::ForwardOperator(Matrix m, std::string lab,
                                 std::optional<std::pair<index_t, index_t>> shape)
    : matrix(std::move(m)), label(std::move(lab)), image_shape(shape) {
  if (label.empty()) throw std::invalid_argument("operator label must be nonempty");
  if (image_shape && image_shape->first * image_shape->second != matrix.cols())
    throw std::invalid_argument("image shape does not match column count");
}

ForwardOperator build_space_varying_blur(const BlurSpec& spec) {
  const index_t d1 = spec.d1, d2 = spec.d2;
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("blur image dims must be >= 1");
  if (spec.r_min < 0.0 || spec.r_min > spec.r_max)
    throw std::invalid_argument("need 0 <= r_min <= r_max");
  if (spec.r_max >= static_cast<double>(std::min(d1, d2)) / 2.0)
    throw std::invalid_argument("r_max must be < min(d1, d2)/2");

  const index_t d = d1 * d2;
  const double cr = static_cast<double>(d1 - 1) / 2.0;
  const double cc = static_cast<double>(d2 - 1) / 2.0;
  const double corner = std::hypot(cr, cc);

  std::vector<index_t> row_ptr(static_cast<std::size_t>(d) + 1, 0);
  std::vector<index_t> cols;
  std::vector<double> vals;
  cols.reserve(static_cast<std::size_t>(d) * 4);
  vals.reserve(static_cast<std::size_t>(d) * 4);

  for (index_t j = 0; j < d2; ++j) {
    for (index_t i = 0; i < d1; ++i) {
      const index_t pixel = j * d1 + i;
      const double dist = std::hypot(static_cast<double>(i) - cr, static_cast<double>(j) - cc);
      const double radius =
          corner > 0.0 ? spec.r_min + (spec.r_max - spec.r_min) * (dist / corner) : spec.r_min;
      const index_t reach = static_cast<index_t>(std::floor(radius));
      const double r2 = radius * radius;

      const std::size_t start = cols.size();
      // Column-major scan keeps the CSR column indices sorted.
      for (index_t jj = std::max<index_t>(0, j - reach); jj <= std::min(d2 - 1, j + reach);
           ++jj) {
        for (index_t ii = std::max<index_t>(0, i - reach); ii <= std::min(d1 - 1, i + reach);
             ++ii) {
          const double dy = static_cast<double>(ii - i);
          const double dx = static_cast<double>(jj - j);
          if (dy * dy + dx * dx <= r2) {
            cols.push_back(jj * d1 + ii);
            vals.push_back(1.0);
          }
        }
      }
      const double count = static_cast<double>(cols.size() - start);
      for (std::size_t p = start; p < cols.size(); ++p) vals[p] = 1.0 / count;
      row_ptr[static_cast<std::size_t>(pixel) + 1] = static_cast<index_t>(cols.size());
    }
  }
  Matrix m = Matrix::csr(d, d, std::move(row_ptr), std::move(cols), std::move(vals));
  return ForwardOperator(std::move(m), "blur", std::make_pair(d1, d2));
}

ForwardOperator build_random_ensemble(const EnsembleSpec& spec, index_t n, index_t d,
                                      std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("ensemble dims must be >= 1");
  Rng rng = Rng::stream(seed, "ensemble");
  switch (spec.kind) {
    case EnsembleKind::kGaussian: {
      const double sd = std::sqrt(spec.var);
      std::vector<double> vals(static_cast<std::size_t>(n * d));
      for (double& v : vals) v = spec.mean + sd * rng.normal();
      return ForwardOperator(Matrix::dense(n, d, std::move(vals)), "gaussian");
    }
    case EnsembleKind::kUniform01: {
      std::vector<double> vals(static_cast<std::size_t>(n * d));
      for (double& v : vals) v = rng.uniform01();
      return ForwardOperator(Matrix::dense(n, d, std::move(vals)), "uniform01");
    }
    case EnsembleKind::kSubsampledWishart: {
      if (n > d)
        throw std::invalid_argument("subsampled Wishart needs n <= d (rows come from a d x d matrix)");
      Eigen::MatrixXd g(d, d);
      for (index_t i = 0; i < d; ++i)
        for (index_t j = 0; j < d; ++j) g(i, j) = rng.normal();
      Eigen::MatrixXd w = (g.transpose() * g) / std::sqrt(static_cast<double>(d));
      const auto rows =
          rng.sample_without_replacement(static_cast<std::size_t>(d), static_cast<std::size_t>(n));
      std::vector<double> vals(static_cast<std::size_t>(n * d));
      for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < d; ++j)
          vals[static_cast<std::size_t>(i * d + j)] =
              w(static_cast<index_t>(rows[static_cast<std::size_t>(i)]), j);
      return ForwardOperator(Matrix::dense(n, d, std::move(vals)), "wishart");
    }
  }
  throw std::invalid_argument("unknown ensemble kind");
}

Matrix diff_operator(index_t d1, index_t d2) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("diff_operator needs d1, d2 >= 2");
  const index_t d = d1 * d2;
  const index_t r = d1 * (d2 - 1) + (d1 - 1) * d2;
  std::vector<index_t> row_ptr(static_cast<std::size_t>(r) + 1, 0);
  std::vector<index_t> cols(static_cast<std::size_t>(2 * r));
  std::vector<double> vals(static_cast<std::size_t>(2 * r));
  index_t row = 0;
  auto emit = [&](index_t lo, index_t hi) {
    cols[static_cast<std::size_t>(2 * row)] = lo;
    vals[static_cast<std::size_t>(2 * row)] = -1.0;
    cols[static_cast<std::size_t>(2 * row + 1)] = hi;
    vals[static_cast<std::size_t>(2 * row + 1)] = 1.0;
    row_ptr[static_cast<std::size_t>(row) + 1] = 2 * (row + 1);
    ++row;
  };
  // Horizontal differences x_{i,j+1} - x_{i,j} ...
  for (index_t j = 0; j + 1 < d2; ++j)
    for (index_t i = 0; i < d1; ++i) emit(j * d1 + i, (j + 1) * d1 + i);
  // ... then vertical differences x_{i+1,j} - x_{i,j}.
  for (index_t j = 0; j < d2; ++j)
    for (index_t i = 0; i + 1 < d1; ++i) emit(j * d1 + i, j * d1 + i + 1);
  return Matrix::csr(r, d, std::move(row_ptr), std::move(cols), std::move(vals));
}

ForwardOperator load_matrix_market(const std::filesystem::path& path) {
  Matrix m = read_matrix_market(path);
  return ForwardOperator(std::move(m), path.stem().string().empty() ? "ingested"
                                                                    : path.stem().string());
}

}  // namespace stochascope
