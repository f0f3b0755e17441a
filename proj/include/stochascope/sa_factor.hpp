#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stochascope/partitions.hpp"
#include "stochascope/spectral.hpp"

namespace stochascope {

// Quantities of A that every bound consumes, computed once per operator.
// When the smaller Gram side fits the dense threshold the full descending
// spectrum of A^T A is kept so the upper bound is a table lookup.
struct OperatorStats {
  index_t n = 0;
  index_t d = 0;
  double sigma1 = 0.0;   // ||A||^2 = sigma(A^T A, 1)
  double l1to2 = 0.0;    // max_i ||a_i||^2
  double frob_sq = 0.0;  // ||A||_F^2 = sum of the spectrum
  double rho = 0.0;      // tight row energy ratio
  std::vector<double> spectrum;  // empty when the operator is too large
  bool spectrum_exact = false;
};

OperatorStats compute_operator_stats(const ForwardOperator& a, const SpectralOptions& opts = {});

// A random-partition bound value together with the delta it was computed at
// and the success probability 1 - d^2 (e/delta)^delta of the theorem
// (vacuous, possibly negative, for delta <= e).
struct DeltaBound {
  double delta = 0.0;
  double value = 0.0;
  double probability = 0.0;
};

// The SA factor Upsilon = K L_f / L_b and every bound around it for one
// (operator, partition) pair.
struct SAReport {
  index_t K = 0;
  double L_f = 0.0;
  double L_b = 0.0;
  double upsilon = 0.0;
  double mu_ell = 0.0;
  double alpha_ell = 0.0;
  double alpha_u = 0.0;
  double alpha_s = 0.0;
  double beta = 0.0;  // +inf when the reference eigenvalue vanishes
  DeltaBound alpha_r_certified;   // delta = 15
  DeltaBound alpha_r_heuristic;   // delta = 2
  DeltaBound alpha_sigma;         // delta = 15
  bool alpha_r_valid_window = false;  // K in [sigma1/l1to2, min(n, d)]
  double rho = 0.0;
  std::string scheme;
};

// Expected-smoothness SA report for uniform with-replacement sampling of
// m-row minibatches. Both values are the printed closed forms; the lower
// bound compares iteration-count rates and is a heuristic comparison factor,
// not a sharp acceleration factor (its m = n sanity value is 2, not 1).
struct ExpectedSAReport {
  index_t m = 0;
  double L_e_bound = 0.0;
  double upsilon_e_lower = 0.0;
  bool delta_free = true;
  bool rate_comparison_heuristic = true;
};

// L_f = ||A||^2 / n.
double full_lipschitz(const ForwardOperator& a, const SpectralOptions& opts = {});

// L_b = (K/n) max_k ||S^k A||^2.
double batch_lipschitz(const ForwardOperator& a, const Partition& p,
                       const SpectralOptions& opts = {});

// Partition-dependent lower bound alpha_ell = ||A||^2 / mu_ell.
double bound_alpha_ell(const ForwardOperator& a, const Partition& p,
                       const SpectralOptions& opts = {});

// Partition-independent lower bounds.
double bound_alpha_u(const OperatorStats& stats, index_t k);
double bound_alpha_s(const OperatorStats& stats, index_t k);

// Upper bound beta = sigma(A^T A, 1) / sigma(A^T A, floor(n - n/K + 1)),
// +inf when the 1-based index exceeds d or the eigenvalue is zero.
double bound_beta(const ForwardOperator& a, index_t k, const SpectralOptions& opts = {});
double bound_beta(const ForwardOperator& a, const OperatorStats& stats, index_t k,
                  const SpectralOptions& opts = {});

// Random-partition lower bounds of the matrix-Chernoff theorem. Any
// delta > 0 is accepted so the heuristic delta = 2 variant can be emitted;
// the attached probability only certifies the bound when delta > e.
DeltaBound bound_alpha_r(const OperatorStats& stats, index_t k, double delta);
DeltaBound bound_alpha_sigma(const OperatorStats& stats, index_t k, double delta);

// Largest dimension d for which the random-partition theorem holds with
// probability at least min_prob: sqrt((1 - min_prob) / (e/delta)^delta).
double max_dim_for_delta(double delta, double min_prob);

ExpectedSAReport expected_sa_with_replacement(const ForwardOperator& a, index_t m,
                                              const SpectralOptions& opts = {});
ExpectedSAReport expected_sa_with_replacement(const OperatorStats& stats, index_t m);

SAReport sa_factor(const ForwardOperator& a, const Partition& p,
                   const SpectralOptions& opts = {});
SAReport sa_factor(const ForwardOperator& a, const OperatorStats& stats, const Partition& p,
                   const SpectralOptions& opts = {});

// One report per K, all with the same scheme (and seed, for random).
std::vector<SAReport> sa_curve(const ForwardOperator& a, PartitionScheme scheme,
                               std::span<const index_t> k_list,
                               std::optional<std::uint64_t> seed = std::nullopt,
                               const SpectralOptions& opts = {});

}  // namespace stochascope
