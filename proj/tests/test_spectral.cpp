#include <doctest.h>

#include "oracles.hpp"
#include "stochascope/error.hpp"
#include "stochascope/spectral.hpp"

using namespace stochascope;

TEST_SUITE("spectral") {

TEST_CASE("spectral_norm_sq on the identity is 1") {
  CHECK(spectral_norm_sq(Matrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral_norm_sq of a rank-1 stack is n*||a||^2") {
  // three identical rows (1, 2): ||A||^2 = 3 * 5 = 15
  const Matrix a = Matrix::dense(3, 2, {1, 2, 1, 2, 1, 2});
  CHECK(spectral_norm_sq(a) == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("spectral_norm_sq matches the dense oracle on a seeded 5x3 gaussian") {
  const auto op = build_random_ensemble({EnsembleKind::kGaussian, 0.0, 1.0}, 5, 3, 77);
  CHECK(oracles::rel_close(spectral_norm_sq(op.matrix), oracles::top_eig(op.matrix), 1e-8));
}

TEST_CASE("power iteration path matches the dense oracle above the dense cutoff") {
  const auto op = build_random_ensemble({EnsembleKind::kGaussian, 0.0, 1.0}, 100, 80, 123);
  SpectralOptions opts;
  opts.tol = 1e-12;
  opts.dense_threshold_norm = 16;  // force the iterative path
  CHECK(oracles::rel_close(spectral_norm_sq(op.matrix, opts), oracles::top_eig(op.matrix), 1e-8));
}

TEST_CASE("power iteration non-convergence carries the last estimate") {
  const auto op = build_random_ensemble({EnsembleKind::kGaussian, 0.0, 1.0}, 80, 70, 5);
  SpectralOptions opts;
  opts.tol = 1e-16;  // unreachable
  opts.dense_threshold_norm = 16;
  opts.max_iter = 3;
  try {
    (void)spectral_norm_sq(op.matrix, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_estimate() > 0.0);
    CHECK(e.residual() >= 0.0);
  }
}

TEST_CASE("eigenspectrum of the identity is all ones and exact") {
  const Spectrum s = eigenspectrum(Matrix::identity(3), 3);
  REQUIRE(s.values.size() == 3);
  CHECK(s.exact);
  for (double v : s.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s.trace_shortfall) < 1e-10);
}

TEST_CASE("eigenspectrum of a diagonal operator") {
  // A = diag(3, 2, 1) so A^T A = diag(9, 4, 1); top 2 are (9, 4).
  const Matrix a = Matrix::csr(3, 3, {0, 1, 2, 3}, {0, 1, 2}, {3.0, 2.0, 1.0});
  const Spectrum s = eigenspectrum(a, 2);
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(s.values[1] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("eigenspectrum matches the dense oracle and the trace identity") {
  const auto op = build_random_ensemble({EnsembleKind::kGaussian, 0.0, 1.0}, 20, 10, 321);
  const Spectrum s = eigenspectrum(op.matrix, 10);
  const Eigen::VectorXd expect = oracles::hessian_eigs_desc(op.matrix);
  REQUIRE(s.values.size() == 10);
  double sum = 0.0;
  for (int i = 0; i < 10; ++i) {
    CHECK(oracles::rel_close(s.values[static_cast<std::size_t>(i)], expect(i), 1e-8));
    sum += s.values[static_cast<std::size_t>(i)];
  }
  CHECK(oracles::rel_close(sum, op.matrix.frobenius_norm_sq(), 1e-8));
}

TEST_CASE("lanczos path agrees with the dense oracle when forced") {
  const auto op = build_random_ensemble({EnsembleKind::kGaussian, 0.0, 1.0}, 40, 30, 99);
  SpectralOptions opts;
  opts.dense_threshold_spectrum = 4;  // force Lanczos
  const Spectrum s = eigenspectrum(op.matrix, 5, opts);
  CHECK_FALSE(s.exact);
  CHECK_FALSE(s.degraded);
  const Eigen::VectorXd expect = oracles::hessian_eigs_desc(op.matrix);
  REQUIRE(s.values.size() == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(oracles::rel_close(s.values[static_cast<std::size_t>(i)], expect(i), 1e-7));
}

TEST_CASE("lanczos reports fewer values on an invariant-subspace breakdown") {
  // Rank-1 operator: the Krylov space collapses after one step.
  const Matrix a = Matrix::dense(4, 4, [] {
    std::vector<double> v(16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) v[static_cast<std::size_t>(i * 4 + j)] = 1.0;
    return v;
  }());
  SpectralOptions opts;
  opts.dense_threshold_spectrum = 0;  // force Lanczos
  const Spectrum s = eigenspectrum(a, 3, opts);
  CHECK(s.degraded);
  CHECK(s.values.size() < 3);
  CHECK(s.values.front() == doctest::Approx(16.0).epsilon(1e-9));
}

TEST_CASE("l1to2_norm_sq basics") {
  CHECK(l1to2_norm_sq(Matrix::identity(6)) == 1.0);
  const Matrix a = Matrix::dense(2, 2, {1, 0, 3, 4});
  CHECK(l1to2_norm_sq(a) == doctest::Approx(25.0));
}

TEST_CASE("l1to2 is at least the mean row energy") {
  for (int i = 0; i < 10; ++i) {
    const auto op = oracles::seeded_instance(i);
    const Matrix& a = op.matrix;
    CHECK(l1to2_norm_sq(a) >=
          a.frobenius_norm_sq() / static_cast<double>(a.rows()) - 1e-12);
  }
}

TEST_CASE("row_energy_ratio basics and zero-matrix error") {
  const Matrix same = Matrix::dense(3, 2, {1, 2, 1, 2, 1, 2});
  CHECK(row_energy_ratio(same) == doctest::Approx(1.0));
  const Matrix two = Matrix::dense(2, 2, {1, 0, 0, 2});
  CHECK(row_energy_ratio(two) == doctest::Approx(1.6));
  CHECK(row_energy_ratio(Matrix::identity(7)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(row_energy_ratio(Matrix::dense(2, 2, {0, 0, 0, 0})), std::domain_error);
}

TEST_CASE("norm equals the top of the spectrum on 50 seeded instances") {
  for (int i = 0; i < 50; ++i) {
    const auto op = oracles::seeded_instance(i, 4, 32);
    const double norm = spectral_norm_sq(op.matrix);
    const Spectrum s = eigenspectrum(op.matrix, 1);
    CHECK(oracles::rel_close(norm, s.values.front(), 1e-8));
    // Full spectrum sums to the Frobenius norm.
    const Spectrum full = eigenspectrum(op.matrix, op.matrix.cols());
    double sum = 0.0;
    for (double v : full.values) sum += v;
    CHECK(oracles::rel_close(sum, op.matrix.frobenius_norm_sq(), 1e-8));
    // Row-norm bound.
    CHECK(oracles::leq_rel(norm, static_cast<double>(op.matrix.rows()) * l1to2_norm_sq(op.matrix),
                           1e-12));
  }
}

TEST_CASE("spectral norm is invariant to row permutation") {
  for (int i = 0; i < 6; ++i) {
    const auto op = oracles::seeded_instance(i, 8, 32);
    const Matrix& a = op.matrix;
    std::vector<index_t> perm(static_cast<std::size_t>(a.rows()));
    for (index_t r = 0; r < a.rows(); ++r) perm[static_cast<std::size_t>(r)] = r;
    Rng rng = Rng::stream(600 + static_cast<std::uint64_t>(i), "perm");
    rng.shuffle(perm);
    const Matrix shuffled = a.subset_rows(perm);
    CHECK(oracles::rel_close(spectral_norm_sq(a), spectral_norm_sq(shuffled), 1e-8));
  }
}

}  // TEST_SUITE
