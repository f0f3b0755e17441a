#include "stochascope/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stochascope/spectral.hpp"

namespace stochascope {

void RegularizerSpec::validate(index_t dim) const {
  if (lambda < 0.0 || gamma < 0.0) throw std::invalid_argument("weights must be >= 0");
  if (d && d->cols() != dim) throw std::invalid_argument("D column count does not match x");
  if (h == HKind::kBox && box_lo > box_hi) throw std::invalid_argument("empty box");
  if (h == HKind::kSupport && static_cast<index_t>(support_mask.size()) != dim)
    throw std::invalid_argument("support mask length does not match x");
}

std::vector<double> prox_scaled(HKind term, const RegularizerSpec& spec, double weight,
                                std::span<const double> v, double step) {
  if (step <= 0.0) throw std::invalid_argument("prox step must be positive");
  std::vector<double> out(v.begin(), v.end());
  switch (term) {
    case HKind::kNone:
      return out;
    case HKind::kL1: {
      const double t = weight * step;
      if (t == 0.0) return out;
      for (double& x : out) {
        if (x > t)
          x -= t;
        else if (x < -t)
          x += t;
        else
          x = 0.0;
      }
      return out;
    }
    case HKind::kNonneg:
      for (double& x : out) x = std::max(x, 0.0);
      return out;
    case HKind::kBox:
      for (double& x : out) x = std::clamp(x, spec.box_lo, spec.box_hi);
      return out;
    case HKind::kSupport:
      for (std::size_t i = 0; i < out.size(); ++i)
        if (!spec.support_mask[i]) out[i] = 0.0;
      return out;
  }
  throw std::invalid_argument("unsupported prox term");
}

std::vector<double> prox_conjugate_l1(std::span<const double> y, double alpha, double lambda) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  std::vector<double> out(y.begin(), y.end());
  prox_conjugate_l1_inplace(out, lambda);
  return out;
}

void prox_conjugate_l1_inplace(std::span<double> y, double lambda) {
  for (double& x : y) x = std::clamp(x, -lambda, lambda);
}

std::vector<double> tv_prox_fgp(std::span<const double> v, double lambda, index_t inner_iters,
                                const Matrix& d, double d_norm_sq) {
  if (inner_iters < 1) throw std::invalid_argument("inner_iters must be >= 1");
  const index_t dim = d.cols();
  if (static_cast<index_t>(v.size()) != dim) throw std::invalid_argument("v length mismatch");
  if (lambda == 0.0) return std::vector<double>(v.begin(), v.end());
  if (d_norm_sq <= 0.0) d_norm_sq = spectral_norm_sq(d);
  const double step = 1.0 / d_norm_sq;
  const index_t r = d.rows();

  // Dual of min_x 0.5||x - v||^2 + lambda||Dx||_1: minimize
  // 0.5||D^T y - v||^2 over ||y||_inf <= lambda; then x = v - D^T y. The
  // accelerated iterates are not monotone, so the best primal point seen is
  // what gets returned.
  std::vector<double> y(static_cast<std::size_t>(r), 0.0);   // accelerated point
  std::vector<double> y_prev(static_cast<std::size_t>(r), 0.0);
  std::vector<double> y_new(static_cast<std::size_t>(r));
  std::vector<double> x(static_cast<std::size_t>(dim));
  std::vector<double> best_x(v.begin(), v.end());
  std::vector<double> grad(static_cast<std::size_t>(r));
  std::vector<double> dx(static_cast<std::size_t>(r));
  double best_obj = std::numeric_limits<double>::infinity();

  // Primal candidate from a dual point, tracked so the best one wins.
  auto consider = [&](const std::vector<double>& dual) {
    d.matvec_t(dual, x);
    double quad = 0.0;
    for (index_t j = 0; j < dim; ++j) {
      const double xj = v[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(j)] = xj;
      quad += (xj - v[static_cast<std::size_t>(j)]) * (xj - v[static_cast<std::size_t>(j)]);
    }
    d.matvec(x, dx);
    double tv = 0.0;
    for (index_t i = 0; i < r; ++i) tv += std::abs(dx[static_cast<std::size_t>(i)]);
    const double obj = 0.5 * quad + lambda * tv;
    if (obj < best_obj) {
      best_obj = obj;
      best_x = x;
    }
  };

  double t = 1.0;
  for (index_t it = 0; it < inner_iters; ++it) {
    // grad of the dual objective at the accelerated point is -D(v - D^T y).
    d.matvec_t(y, x);
    for (index_t j = 0; j < dim; ++j)
      x[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)];
    d.matvec(x, grad);
    for (index_t i = 0; i < r; ++i)
      y_new[static_cast<std::size_t>(i)] =
          std::clamp(y[static_cast<std::size_t>(i)] + step * grad[static_cast<std::size_t>(i)],
                     -lambda, lambda);
    consider(y_new);
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    const double momentum = (t - 1.0) / t_next;
    for (index_t i = 0; i < r; ++i) {
      const double yi = y_new[static_cast<std::size_t>(i)];
      y[static_cast<std::size_t>(i)] = yi + momentum * (yi - y_prev[static_cast<std::size_t>(i)]);
      y_prev[static_cast<std::size_t>(i)] = yi;
    }
    t = t_next;
  }
  return best_x;
}

}  // namespace stochascope
