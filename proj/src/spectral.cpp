#include "stochascope/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "stochascope/error.hpp"

namespace stochascope {

namespace {

// Gram matrix of the smaller side: A A^T when n <= d, else A^T A. Both share
// their nonzero eigenvalues with A^T A.
Eigen::MatrixXd smaller_gram(const Matrix& a) {
  const index_t n = a.rows(), d = a.cols();
  if (n <= d) {
    Eigen::MatrixXd g(n, n);
    for (index_t i = 0; i < n; ++i)
      for (index_t j = 0; j <= i; ++j) {
        const double v = a.row_dot(i, j);
        g(i, j) = v;
        g(j, i) = v;
      }
    return g;
  }
  const Eigen::MatrixXd m = a.to_eigen();
  return m.transpose() * m;
}

void clamp_psd(std::vector<double>& values) {
  if (values.empty()) return;
  const double sigma1 = std::max(values.front(), 0.0);
  const double floor = -1e-10 * sigma1 - 1e-300;
  for (double& v : values) {
    if (v < 0.0) {
      if (v < floor)
        throw std::runtime_error("eigenvalue estimate " + std::to_string(v) +
                                 " below the PSD clamping floor");
      v = 0.0;
    }
  }
}

std::vector<double> dense_descending_eigs(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigendecomposition failed");
  std::vector<double> values(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
  std::reverse(values.begin(), values.end());
  clamp_psd(values);
  return values;
}

// One application of A^T A.
void gram_apply(const Matrix& a, const std::vector<double>& v, std::vector<double>& av,
                std::vector<double>& out) {
  a.matvec(v, av);
  a.matvec_t(av, out);
}

double power_iteration(const Matrix& a, const SpectralOptions& opts) {
  const index_t d = a.cols();
  std::vector<double> v(static_cast<std::size_t>(d), 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> av(static_cast<std::size_t>(a.rows()));
  std::vector<double> w(static_cast<std::size_t>(d));
  bool perturbed = false;
  double lambda_prev = 0.0;
  double residual = 0.0;
  for (index_t it = 0; it < opts.max_iter; ++it) {
    gram_apply(a, v, av, w);
    double lambda = 0.0;
    for (index_t j = 0; j < d; ++j) lambda += v[j] * w[j];
    if (lambda <= 0.0) {
      // Start vector sits in the null space; documented ramp fallback.
      if (!perturbed) {
        perturbed = true;
        double norm = 0.0;
        for (index_t j = 0; j < d; ++j) {
          v[j] = 1.0 + static_cast<double>(j) / static_cast<double>(d + 1);
          norm += v[j] * v[j];
        }
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
        continue;
      }
      return 0.0;  // genuinely the zero map
    }
    residual = 0.0;
    double wn = 0.0;
    for (index_t j = 0; j < d; ++j) {
      const double r = w[j] - lambda * v[j];
      residual += r * r;
      wn += w[j] * w[j];
    }
    residual = std::sqrt(residual) / lambda;
    if (it > 0 && std::abs(lambda - lambda_prev) <= opts.tol * lambda) return lambda;
    lambda_prev = lambda;
    wn = std::sqrt(wn);
    for (index_t j = 0; j < d; ++j) v[j] = w[j] / wn;
  }
  throw ConvergenceError("power iteration did not converge in " +
                             std::to_string(opts.max_iter) + " iterations",
                         lambda_prev, residual);
}

struct LanczosResult {
  std::vector<double> values;
  bool complete = false;  // k values converged (or invariant subspace found)
};

LanczosResult lanczos_topk(const Matrix& a, index_t k, const SpectralOptions& opts) {
  const index_t d = a.cols();
  const index_t max_steps = std::min<index_t>(d, std::max<index_t>(4 * k, 128));
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;  // T diagonal / off-diagonal
  std::vector<double> q(static_cast<std::size_t>(d), 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> av(static_cast<std::size_t>(a.rows()));
  std::vector<double> w(static_cast<std::size_t>(d));

  auto ritz = [&](index_t j) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j, j);
    for (index_t i = 0; i < j; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < j) {
        t(i, i + 1) = beta[static_cast<std::size_t>(i)];
        t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    return es;
  };

  double scale = 0.0;
  for (index_t step = 0; step < max_steps; ++step) {
    basis.push_back(q);
    gram_apply(a, q, av, w);
    double al = 0.0;
    for (index_t j = 0; j < d; ++j) al += q[j] * w[j];
    alpha.push_back(al);
    scale = std::max(scale, std::abs(al));
    // w -= alpha*q + beta*q_prev, then full reorthogonalization (twice).
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double proj = 0.0;
        for (index_t j = 0; j < d; ++j) proj += b[j] * w[j];
        for (index_t j = 0; j < d; ++j) w[j] -= proj * b[j];
      }
    }
    double bnorm = 0.0;
    for (index_t j = 0; j < d; ++j) bnorm += w[j] * w[j];
    bnorm = std::sqrt(bnorm);

    const index_t jdim = static_cast<index_t>(alpha.size());
    if (bnorm <= 1e-13 * std::max(scale, 1.0) || jdim == d) {
      // Invariant subspace: Ritz values are exact for it.
      auto es = ritz(jdim);
      std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + jdim);
      std::reverse(vals.begin(), vals.end());
      clamp_psd(vals);
      if (static_cast<index_t>(vals.size()) > k) vals.resize(static_cast<std::size_t>(k));
      return {std::move(vals), static_cast<index_t>(vals.size()) == k};
    }

    beta.push_back(bnorm);
    for (index_t j = 0; j < d; ++j) q[j] = w[j] / bnorm;

    if (jdim >= k) {
      auto es = ritz(jdim);
      bool converged = true;
      for (index_t i = 0; i < k; ++i) {
        const index_t col = jdim - 1 - i;  // descending order
        const double theta = es.eigenvalues()(col);
        const double resid = std::abs(bnorm * es.eigenvectors()(jdim - 1, col));
        if (resid > opts.tol * std::max(std::abs(theta), 1e-30) * 100.0) {
          converged = false;
          break;
        }
      }
      if (converged) {
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(k));
        for (index_t i = 0; i < k; ++i) vals.push_back(es.eigenvalues()(jdim - 1 - i));
        clamp_psd(vals);
        return {std::move(vals), true};
      }
    }
  }
  // Out of steps: report the best Ritz values we have.
  const index_t jdim = static_cast<index_t>(alpha.size());
  auto es = ritz(jdim);
  std::vector<double> vals;
  const index_t avail = std::min(k, jdim);
  for (index_t i = 0; i < avail; ++i) vals.push_back(es.eigenvalues()(jdim - 1 - i));
  clamp_psd(vals);
  return {std::move(vals), false};
}

}  // namespace

double spectral_norm_sq(const Matrix& a, const SpectralOptions& opts) {
  if (opts.tol <= 0.0) throw std::invalid_argument("tol must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (std::min(a.rows(), a.cols()) <= opts.dense_threshold_norm)
    return dense_descending_eigs(smaller_gram(a)).front();
  return power_iteration(a, opts);
}

Spectrum eigenspectrum(const Matrix& a, index_t k, const SpectralOptions& opts) {
  const index_t d = a.cols();
  if (k < 1 || k > d) throw std::invalid_argument("k must be in [1, d]");
  Spectrum s;
  const index_t small_side = std::min(a.rows(), d);
  if (small_side <= opts.dense_threshold_spectrum) {
    std::vector<double> vals = dense_descending_eigs(smaller_gram(a));
    // Eigenvalues of A^T A beyond rank(A) <= min(n, d) are exactly zero.
    vals.resize(static_cast<std::size_t>(k), 0.0);
    s.values = std::move(vals);
    s.exact = true;
  } else {
    LanczosResult r = lanczos_topk(a, k, opts);
    s.values = std::move(r.values);
    s.exact = false;
    s.degraded = !r.complete;
  }
  double sum = 0.0;
  for (double v : s.values) sum += v;
  s.trace_shortfall = sum - a.frobenius_norm_sq();
  return s;
}

double l1to2_norm_sq(const Matrix& a) {
  const std::vector<double> norms = a.row_norms_sq();
  return *std::max_element(norms.begin(), norms.end());
}

double row_energy_ratio(const Matrix& a) {
  const std::vector<double> norms = a.row_norms_sq();
  double maxv = 0.0, sum = 0.0;
  for (double v : norms) {
    maxv = std::max(maxv, v);
    sum += v;
  }
  if (maxv == 0.0) throw std::domain_error("row_energy_ratio of an all-zero matrix");
  return maxv / (sum / static_cast<double>(a.rows()));
}

}  // namespace stochascope
