#pragma once

#include <vector>

#include "stochascope/matrix.hpp"

namespace stochascope {

// Descending eigenvalue estimates of A^T A.
struct Spectrum {
  std::vector<double> values;
  bool exact = false;      // computed by full decomposition
  bool degraded = false;   // Lanczos returned fewer values than requested
  double trace_shortfall = 0.0;  // sum(values) - ||A||_F^2
};

struct SpectralOptions {
  double tol = 1e-12;       // relative tolerance of the iterative estimate
  index_t max_iter = 50000; // power iteration budget
  // Gram side at most this large goes through a full dense decomposition.
  // The norm threshold is 256: random row blocks routinely have
  // near-degenerate top eigenvalue pairs, where power iteration cannot
  // certify 1e-12 relative change in any reasonable budget while a
  // few-hundred-dimensional Gram eigensolve is exact and takes
  // milliseconds.
  index_t dense_threshold_norm = 256;
  index_t dense_threshold_spectrum = 2048;
};

// ||A||^2 = sigma(A^T A, 1). Full decomposition of the smaller Gram matrix
// when min(n, d) <= dense_threshold_norm; otherwise power iteration on A^T A
// starting from the normalized all-ones vector. If the Rayleigh quotient
// stalls at zero the start is perturbed once by the deterministic ramp
// v_i = 1 + i/(d+1). Throws ConvergenceError past max_iter.
double spectral_norm_sq(const Matrix& a, const SpectralOptions& opts = {});

// Top-k eigenvalues of A^T A, 1 <= k <= d. Full decomposition of the smaller
// Gram side when min(n, d) <= dense_threshold_spectrum (eigenvalues beyond
// min(n, d) are exactly zero); Lanczos with full reorthogonalization
// otherwise. Lanczos breakdown before k values converged returns fewer with
// the degraded flag set.
Spectrum eigenspectrum(const Matrix& a, index_t k, const SpectralOptions& opts = {});

// max_i ||a_i||^2 (squared l1->2 norm of A^T).
double l1to2_norm_sq(const Matrix& a);

// max_i ||a_i||^2 / mean_j ||a_j||^2; errors on an all-zero matrix.
double row_energy_ratio(const Matrix& a);

}  // namespace stochascope
