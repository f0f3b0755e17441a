#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "stochascope/matrix.hpp"

namespace stochascope {

// Composite regularizer lambda*g(D x) + gamma*h(x). g is l1 composed with a
// linear map (identity or an explicit D); h is a separable term with a
// closed-form prox.
enum class GKind { kNone, kL1 };
enum class HKind { kNone, kL1, kNonneg, kBox, kSupport };

struct RegularizerSpec {
  GKind g = GKind::kNone;
  double lambda = 0.0;
  std::shared_ptr<const Matrix> d;  // null means identity
  HKind h = HKind::kNone;
  double gamma = 0.0;
  double box_lo = 0.0;
  double box_hi = 0.0;
  std::vector<char> support_mask;  // h = support: 0 entries are pinned to zero

  bool g_is_identity() const { return d == nullptr; }
  void validate(index_t dim) const;
};

// prox of step*weight*(the h term) at v: soft-threshold for l1, euclidean
// projection for the indicator terms, identity for none.
std::vector<double> prox_scaled(HKind term, const RegularizerSpec& spec, double weight,
                                std::span<const double> v, double step);

// prox of the conjugate of lambda*||.||_1, i.e. projection onto the
// lambda-radius l-infinity ball. Step independent.
std::vector<double> prox_conjugate_l1(std::span<const double> y, double alpha, double lambda);
void prox_conjugate_l1_inplace(std::span<double> y, double lambda);

// Approximate prox of lambda*||D .||_1 at v by accelerated projected
// gradient on the dual with step 1/||D||^2 and a fixed iteration budget.
// Deterministic; used as the inner TV prox of the FISTA baseline.
std::vector<double> tv_prox_fgp(std::span<const double> v, double lambda, index_t inner_iters,
                                const Matrix& d, double d_norm_sq = 0.0);

}  // namespace stochascope
