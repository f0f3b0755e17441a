#include "stochascope/sa_factor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stochascope/error.hpp"
#include "stochascope/threads.hpp"

namespace stochascope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double theorem_probability(double delta, index_t d) {
  const double dd = static_cast<double>(d);
  return 1.0 - dd * dd * std::pow(std::exp(1.0) / delta, delta);
}

double max_block_norm_sq(const ForwardOperator& a, const Partition& p,
                         const SpectralOptions& opts) {
  const index_t nb = p.num_blocks();
  double worst = 0.0;
  std::exception_ptr error;  // exceptions must not escape the parallel region
#pragma omp parallel for schedule(dynamic) reduction(max : worst) \
    num_threads(effective_threads())
  for (index_t k = 0; k < nb; ++k) {
    try {
      const Matrix block = subset_operator(a, p.blocks[static_cast<std::size_t>(k)]);
      worst = std::max(worst, spectral_norm_sq(block, opts));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return worst;
}

}  // namespace

OperatorStats compute_operator_stats(const ForwardOperator& a, const SpectralOptions& opts) {
  const Matrix& m = a.matrix;
  OperatorStats s;
  s.n = m.rows();
  s.d = m.cols();
  s.l1to2 = l1to2_norm_sq(m);
  s.frob_sq = m.frobenius_norm_sq();
  s.rho = row_energy_ratio(m);
  if (std::min(s.n, s.d) <= opts.dense_threshold_spectrum) {
    Spectrum sp = eigenspectrum(m, s.d, opts);
    s.sigma1 = sp.values.front();
    s.spectrum = std::move(sp.values);
    s.spectrum_exact = sp.exact;
  } else {
    s.sigma1 = spectral_norm_sq(m, opts);
  }
  return s;
}

double full_lipschitz(const ForwardOperator& a, const SpectralOptions& opts) {
  return spectral_norm_sq(a.matrix, opts) / static_cast<double>(a.matrix.rows());
}

double batch_lipschitz(const ForwardOperator& a, const Partition& p,
                       const SpectralOptions& opts) {
  if (p.n != a.matrix.rows()) throw std::invalid_argument("partition does not match operator");
  const double k = static_cast<double>(p.num_blocks());
  const double n = static_cast<double>(p.n);
  return (k / n) * max_block_norm_sq(a, p, opts);
}

double bound_alpha_ell(const ForwardOperator& a, const Partition& p,
                       const SpectralOptions& opts) {
  const double mu = local_accumulated_coherence(a, p);
  if (mu == 0.0) throw std::domain_error("alpha_ell undefined: zero local coherence");
  return spectral_norm_sq(a.matrix, opts) / mu;
}

double bound_alpha_u(const OperatorStats& stats, index_t k) {
  if (stats.l1to2 == 0.0) throw std::domain_error("alpha_u undefined for a zero operator");
  return static_cast<double>(k) * stats.sigma1 / (static_cast<double>(stats.n) * stats.l1to2);
}

double bound_alpha_s(const OperatorStats& stats, index_t k) {
  // The spectrum sum is evaluated as ||A||_F^2 (trace identity), never via
  // an eigendecomposition.
  if (stats.frob_sq == 0.0) throw std::domain_error("alpha_s undefined for a zero operator");
  return static_cast<double>(k) * stats.sigma1 / (stats.rho * stats.frob_sq);
}

double bound_beta(const ForwardOperator& a, index_t k, const SpectralOptions& opts) {
  return bound_beta(a, compute_operator_stats(a, opts), k, opts);
}

double bound_beta(const ForwardOperator& a, const OperatorStats& stats, index_t k,
                  const SpectralOptions& opts) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  const double n = static_cast<double>(stats.n);
  // 1-based index floor(n - n/K + 1); sigma(H, i) = 0 for i > d by convention.
  const index_t idx =
      static_cast<index_t>(std::floor(n - n / static_cast<double>(k) + 1.0));
  if (idx > stats.d) return kInf;
  double sigma_idx;
  double sigma_top;
  if (!stats.spectrum.empty()) {
    sigma_idx = stats.spectrum[static_cast<std::size_t>(idx - 1)];
    sigma_top = stats.spectrum.front();
  } else {
    const Spectrum sp = eigenspectrum(a.matrix, idx, opts);
    if (sp.degraded)
      throw ConvergenceError("eigenspectrum degraded while evaluating the upper bound",
                             sp.values.empty() ? 0.0 : sp.values.back(), 0.0);
    sigma_idx = sp.values.back();
    sigma_top = sp.values.front();
  }
  if (sigma_idx <= 0.0) return kInf;
  return sigma_top / sigma_idx;
}

DeltaBound bound_alpha_r(const OperatorStats& stats, index_t k, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  if (stats.sigma1 == 0.0) throw std::domain_error("alpha_r undefined for a zero operator");
  DeltaBound b;
  b.delta = delta;
  b.value = 1.0 / (1.0 / static_cast<double>(k) + delta * stats.l1to2 / stats.sigma1);
  b.probability = theorem_probability(delta, stats.d);
  return b;
}

DeltaBound bound_alpha_sigma(const OperatorStats& stats, index_t k, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  if (stats.sigma1 == 0.0) throw std::domain_error("alpha_sigma undefined for a zero operator");
  DeltaBound b;
  b.delta = delta;
  b.value = 1.0 / (1.0 / static_cast<double>(k) +
                   delta * (stats.rho / static_cast<double>(stats.n)) * stats.frob_sq /
                       stats.sigma1);
  b.probability = theorem_probability(delta, stats.d);
  return b;
}

double max_dim_for_delta(double delta, double min_prob) {
  if (!(min_prob > 0.0 && min_prob < 1.0)) throw std::invalid_argument("need 0 < min_prob < 1");
  if (delta <= std::exp(1.0)) throw std::invalid_argument("delta must exceed e");
  return std::sqrt((1.0 - min_prob) / std::pow(std::exp(1.0) / delta, delta));
}

ExpectedSAReport expected_sa_with_replacement(const ForwardOperator& a, index_t m,
                                              const SpectralOptions& opts) {
  return expected_sa_with_replacement(compute_operator_stats(a, opts), m);
}

ExpectedSAReport expected_sa_with_replacement(const OperatorStats& stats, index_t m) {
  const index_t n = stats.n;
  if (n < 2) throw std::invalid_argument("with-replacement report needs n >= 2");
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= n");
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  const double l_f = stats.sigma1 / nd;
  ExpectedSAReport r;
  r.m = m;
  r.L_e_bound = (md - 1.0) / (md * (nd - 1.0)) * l_f + (nd - md) / (md * (nd - 1.0)) * stats.l1to2;
  r.upsilon_e_lower = 1.0 / ((md - 1.0) / (2.0 * (nd - 1.0)) +
                             (nd - md) / (2.0 * (nd - 1.0)) * stats.l1to2 / stats.sigma1);
  return r;
}

SAReport sa_factor(const ForwardOperator& a, const Partition& p, const SpectralOptions& opts) {
  return sa_factor(a, compute_operator_stats(a, opts), p, opts);
}

SAReport sa_factor(const ForwardOperator& a, const OperatorStats& stats, const Partition& p,
                   const SpectralOptions& opts) {
  if (p.n != stats.n) throw std::invalid_argument("partition does not match operator");
  const index_t k = p.num_blocks();
  const double n = static_cast<double>(stats.n);

  SAReport r;
  r.K = k;
  r.scheme = scheme_name(p.scheme);
  r.rho = stats.rho;
  r.L_f = stats.sigma1 / n;
  r.L_b = (static_cast<double>(k) / n) * max_block_norm_sq(a, p, opts);
  if (r.L_b == 0.0) throw std::domain_error("SA factor undefined for a zero operator");
  r.upsilon = static_cast<double>(k) * r.L_f / r.L_b;
  r.mu_ell = local_accumulated_coherence(a, p);
  if (r.mu_ell == 0.0) throw std::domain_error("alpha_ell undefined: zero local coherence");
  r.alpha_ell = stats.sigma1 / r.mu_ell;
  r.alpha_u = bound_alpha_u(stats, k);
  r.alpha_s = bound_alpha_s(stats, k);
  r.beta = bound_beta(a, stats, k, opts);
  r.alpha_r_certified = bound_alpha_r(stats, k, 15.0);
  r.alpha_r_heuristic = bound_alpha_r(stats, k, 2.0);
  r.alpha_sigma = bound_alpha_sigma(stats, k, 15.0);
  const double window_lo = stats.sigma1 / stats.l1to2;
  r.alpha_r_valid_window = static_cast<double>(k) >= window_lo &&
                           k <= std::min(stats.n, stats.d);
  return r;
}

std::vector<SAReport> sa_curve(const ForwardOperator& a, PartitionScheme scheme,
                               std::span<const index_t> k_list,
                               std::optional<std::uint64_t> seed, const SpectralOptions& opts) {
  const OperatorStats stats = compute_operator_stats(a, opts);
  std::vector<SAReport> out;
  out.reserve(k_list.size());
  for (index_t k : k_list) {
    const Partition p = make_partition(scheme, stats.n, k, seed);
    out.push_back(sa_factor(a, stats, p, opts));
  }
  return out;
}

}  // namespace stochascope
