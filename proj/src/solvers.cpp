#include "stochascope/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stochascope/error.hpp"
#include "stochascope/rng.hpp"
#include "stochascope/sa_factor.hpp"

namespace stochascope {

namespace {

constexpr double kDivergenceGuard = 1e12;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

using clock = std::chrono::steady_clock;

double nrm2_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

// (1/n) A^T (A x - b) into grad; returns the residual Ax - b through scratch.
void full_gradient(const Problem& p, std::span<const double> x, std::vector<double>& resid,
                   std::vector<double>& grad) {
  resid.resize(static_cast<std::size_t>(p.A.matrix.rows()));
  p.A.matrix.matvec(x, resid);
  for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= p.b[i];
  p.A.matrix.matvec_t(resid, grad);
  const double inv_n = 1.0 / static_cast<double>(p.A.matrix.rows());
  for (double& g : grad) g *= inv_n;
}

struct TraceLogger {
  explicit TraceLogger(const Problem& p) : problem(p), start(clock::now()) {
    trace.est_error_available = p.x_true.has_value();
  }

  void log(double epoch, std::span<const double> x) {
    TraceRecord rec;
    rec.epoch = epoch;
    rec.objective = objective_value(problem, x);
    if (problem.x_true) {
      double e = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - (*problem.x_true)[i];
        e += diff * diff;
      }
      rec.est_error = e;
    } else {
      rec.est_error = kNan;
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - start).count();
    if (!std::isfinite(rec.objective) || rec.objective > kDivergenceGuard)
      throw DivergenceError("objective " + std::to_string(rec.objective) +
                                " exceeded the divergence guard at epoch " +
                                std::to_string(epoch),
                            rec.objective);
    trace.records.push_back(rec);
  }

  const Problem& problem;
  clock::time_point start;
  Trace trace;
};

// Steps are positive when given; zero means "use the default" and theta's
// sentinel is negative.
void validate_config(const SolverConfig& cfg) {
  if (cfg.eta < 0.0 || cfg.sigma < 0.0 || cfg.tau < 0.0 || cfg.alpha < 0.0)
    throw std::invalid_argument("step sizes must be positive (0 selects the default)");
  if (cfg.inner_len < 0 || cfg.outer_loops < 0 || cfg.tv_inner < 1)
    throw std::invalid_argument("loop counts must be nonnegative and tv_inner >= 1");
}

std::vector<double> initial_point(const Problem& p, const SolverConfig& cfg) {
  if (cfg.x0) {
    if (static_cast<index_t>(cfg.x0->size()) != p.A.matrix.cols())
      throw std::invalid_argument("x0 length does not match operator columns");
    return *cfg.x0;
  }
  // Backprojection A^T b / n.
  std::vector<double> x = p.A.matrix.apply_t(p.b);
  const double inv_n = 1.0 / static_cast<double>(p.A.matrix.rows());
  for (double& v : x) v *= inv_n;
  return x;
}

// The single closed-form nonsmooth term PGD-style solvers can handle:
// g (identity D) or h, never both.
struct SingleProx {
  bool use_g = false;   // soft-threshold with weight lambda
  bool use_h = false;   // spec.h prox with weight gamma
};

SingleProx single_prox_plan(const RegularizerSpec& reg, bool allow_tv_g) {
  SingleProx plan;
  const bool has_g = reg.g == GKind::kL1 && reg.lambda > 0.0;
  const bool has_h = reg.h != HKind::kNone;
  if (has_g && has_h)
    throw std::invalid_argument(
        "this solver handles a single nonsmooth term; use pdhg or acc_pd_sgd for g(Dx) + h(x)");
  if (has_g && !reg.g_is_identity() && !allow_tv_g)
    throw std::invalid_argument("this solver needs an identity-D regularizer");
  plan.use_g = has_g;
  plan.use_h = has_h;
  return plan;
}

std::vector<double> apply_single_prox(const Problem& p, const SingleProx& plan,
                                      std::span<const double> v, double step,
                                      index_t tv_inner, double d_norm_sq) {
  if (plan.use_g) {
    if (p.reg.g_is_identity())
      return prox_scaled(HKind::kL1, p.reg, p.reg.lambda, v, step);
    return tv_prox_fgp(v, p.reg.lambda * step, tv_inner, *p.reg.d, d_norm_sq);
  }
  if (plan.use_h) return prox_scaled(p.reg.h, p.reg, p.reg.gamma, v, step);
  return std::vector<double>(v.begin(), v.end());
}

// Partitioned gradient state shared by the stochastic solvers.
struct BlockSampler {
  std::vector<Matrix> blocks;         // S^k A
  std::vector<std::vector<double>> b; // S^k b
  std::vector<double> weight;         // K/n per spec'd minibatch definition
  std::vector<double> datapass;       // |S_k| / n
  Partition partition;

  static BlockSampler build(const Problem& p, const SamplingSpec& s) {
    const index_t n = p.A.matrix.rows();
    Partition part =
        s.explicit_blocks ? *s.explicit_blocks
                          : make_partition(s.scheme, n, s.K, s.partition_seed);
    BlockSampler out;
    const double kd = static_cast<double>(part.num_blocks());
    const double nd = static_cast<double>(n);
    for (const auto& block : part.blocks) {
      out.blocks.push_back(subset_operator(p.A, block));
      std::vector<double> bb(block.size());
      for (std::size_t i = 0; i < block.size(); ++i)
        bb[i] = p.b[static_cast<std::size_t>(block[i])];
      out.b.push_back(std::move(bb));
      out.weight.push_back(kd / nd);
      out.datapass.push_back(static_cast<double>(block.size()) / nd);
    }
    out.partition = std::move(part);
    return out;
  }

  index_t num_blocks() const { return static_cast<index_t>(blocks.size()); }

  // grad += weight * (S^k A)^T (S^k A x - S^k b); grad must be zeroed first.
  void block_gradient(index_t k, std::span<const double> x, std::vector<double>& resid,
                      std::vector<double>& grad) const {
    const auto ki = static_cast<std::size_t>(k);
    resid.resize(b[ki].size());
    blocks[ki].matvec(x, resid);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= b[ki][i];
    blocks[ki].matvec_t(resid, grad);
    for (double& g : grad) g *= weight[ki];
  }
};

double d_operator_norm_sq(const Problem& p) {
  if (p.reg.g != GKind::kL1 || p.reg.lambda == 0.0) return 0.0;
  if (p.reg.g_is_identity()) return 1.0;
  return spectral_norm_sq(*p.reg.d);
}

}  // namespace

Problem make_problem(ForwardOperator a, std::vector<double> b,
                     std::optional<std::vector<double>> x_true, RegularizerSpec reg,
                     std::optional<double> noise_norm) {
  if (static_cast<index_t>(b.size()) != a.matrix.rows())
    throw std::invalid_argument("b length does not match operator rows");
  if (x_true && static_cast<index_t>(x_true->size()) != a.matrix.cols())
    throw std::invalid_argument("x_true length does not match operator columns");
  reg.validate(a.matrix.cols());
  Problem p{std::move(a), std::move(b), std::move(x_true), std::move(reg), noise_norm, {}};
  if (p.x_true) {
    std::vector<double> r = p.A.matrix.apply(*p.x_true);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
    p.true_residual_norm = std::sqrt(nrm2_sq(r));
  }
  return p;
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kPgd: return "pgd";
    case Algorithm::kFista: return "fista";
    case Algorithm::kMinibatchSgd: return "minibatch_sgd";
    case Algorithm::kProxSvrg: return "prox_svrg";
    case Algorithm::kPdhg: return "pdhg";
    case Algorithm::kAccPdSgd: return "acc_pd_sgd";
  }
  return "pgd";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "pgd") return Algorithm::kPgd;
  if (name == "fista") return Algorithm::kFista;
  if (name == "minibatch_sgd") return Algorithm::kMinibatchSgd;
  if (name == "prox_svrg") return Algorithm::kProxSvrg;
  if (name == "pdhg") return Algorithm::kPdhg;
  if (name == "acc_pd_sgd") return Algorithm::kAccPdSgd;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::vector<double> full_gradient_value(const Problem& p, std::span<const double> x) {
  std::vector<double> resid, grad(x.size());
  full_gradient(p, x, resid, grad);
  return grad;
}

std::vector<double> partition_block_gradient(const Problem& p, const Partition& part,
                                             index_t k, std::span<const double> x) {
  if (k < 0 || k >= part.num_blocks()) throw std::out_of_range("block index");
  const auto& block = part.blocks[static_cast<std::size_t>(k)];
  const Matrix sub = subset_operator(p.A, block);
  std::vector<double> resid(block.size());
  sub.matvec(x, resid);
  for (std::size_t i = 0; i < block.size(); ++i)
    resid[i] -= p.b[static_cast<std::size_t>(block[i])];
  std::vector<double> grad(x.size());
  sub.matvec_t(resid, grad);
  const double w =
      static_cast<double>(part.num_blocks()) / static_cast<double>(p.A.matrix.rows());
  for (double& g : grad) g *= w;
  return grad;
}

std::vector<double> subset_gradient(const Problem& p, std::span<const index_t> rows,
                                    std::span<const double> x) {
  const Matrix sub = p.A.matrix.subset_rows(rows);
  std::vector<double> resid(rows.size());
  sub.matvec(x, resid);
  for (std::size_t i = 0; i < rows.size(); ++i)
    resid[i] -= p.b[static_cast<std::size_t>(rows[i])];
  std::vector<double> grad(x.size());
  sub.matvec_t(resid, grad);
  const double w = 1.0 / static_cast<double>(rows.size());
  for (double& g : grad) g *= w;
  return grad;
}

double objective_value(const Problem& p, std::span<const double> x) {
  std::vector<double> r = p.A.matrix.apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
  double f = 0.5 * nrm2_sq(r) / static_cast<double>(p.A.matrix.rows());
  if (p.reg.g == GKind::kL1 && p.reg.lambda > 0.0) {
    if (p.reg.g_is_identity())
      f += p.reg.lambda * l1_norm(x);
    else
      f += p.reg.lambda * l1_norm(p.reg.d->apply(x));
  }
  if (p.reg.h == HKind::kL1 && p.reg.gamma > 0.0) f += p.reg.gamma * l1_norm(x);
  return f;
}

SolveResult pgd(const Problem& p, const SolverConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  validate_config(cfg);
  const SingleProx plan = single_prox_plan(p.reg, /*allow_tv_g=*/false);
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / full_lipschitz(p.A);

  std::vector<double> x = initial_point(p, cfg);
  std::vector<double> resid(static_cast<std::size_t>(p.A.matrix.rows()));
  std::vector<double> grad(x.size());
  TraceLogger log(p);
  log.log(0.0, x);
  for (index_t it = 1; it <= cfg.epochs; ++it) {
    full_gradient(p, x, resid, grad);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * grad[j];
    x = apply_single_prox(p, plan, x, eta, cfg.tv_inner, 0.0);
    log.log(static_cast<double>(it), x);
  }
  return {std::move(x), std::move(log.trace), {}};
}

SolveResult fista(const Problem& p, const SolverConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  validate_config(cfg);
  const SingleProx plan = single_prox_plan(p.reg, /*allow_tv_g=*/true);
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / full_lipschitz(p.A);
  const double d_norm = d_operator_norm_sq(p);

  std::vector<double> x = initial_point(p, cfg);
  std::vector<double> x_prev = x;
  std::vector<double> y = x;
  std::vector<double> resid(static_cast<std::size_t>(p.A.matrix.rows()));
  std::vector<double> grad(x.size());
  double t = 1.0;
  TraceLogger log(p);
  log.log(0.0, x);
  for (index_t it = 1; it <= cfg.epochs; ++it) {
    full_gradient(p, y, resid, grad);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] -= eta * grad[j];
    x = apply_single_prox(p, plan, y, eta, cfg.tv_inner, d_norm);
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    const double momentum = (t - 1.0) / t_next;
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + momentum * (x[j] - x_prev[j]);
    x_prev = x;
    t = t_next;
    log.log(static_cast<double>(it), x);
  }
  return {std::move(x), std::move(log.trace), {}};
}

SolveResult minibatch_sgd(const Problem& p, const SolverConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  validate_config(cfg);
  if (p.reg.g == GKind::kL1 && p.reg.lambda > 0.0)
    throw std::invalid_argument("minibatch_sgd solves constrained least squares; g must be absent");
  if (p.reg.h == HKind::kL1)
    throw std::invalid_argument("minibatch_sgd needs a projection-form constraint h");
  const index_t n = p.A.matrix.rows();
  Rng rng = Rng::stream(cfg.seed, "minibatch_sgd");

  std::vector<double> x = initial_point(p, cfg);
  std::vector<double> resid;
  std::vector<double> grad(x.size());
  TraceLogger log(p);
  log.log(0.0, x);

  auto project = [&](std::vector<double>& v) {
    if (p.reg.h != HKind::kNone) v = prox_scaled(p.reg.h, p.reg, p.reg.gamma, v, 1.0);
  };

  if (cfg.sampling.with_replacement) {
    const index_t m = cfg.sampling.m;
    if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= n");
    double eta = cfg.eta;
    if (eta <= 0.0) {
      // Step 1/L_e from the expected-smoothness bound; full batch reduces it
      // to 1/L_f.
      eta = (m == n || n < 2) ? 1.0 / full_lipschitz(p.A)
                              : 1.0 / expected_sa_with_replacement(p.A, m).L_e_bound;
    }
    double dp = 0.0;
    double next_log = 1.0;
    const double dp_step = static_cast<double>(m) / static_cast<double>(n);
    std::vector<index_t> rows(static_cast<std::size_t>(m));
    while (dp < static_cast<double>(cfg.epochs) - 1e-12) {
      const auto sample = rng.sample_without_replacement(static_cast<std::size_t>(n),
                                                         static_cast<std::size_t>(m));
      for (std::size_t i = 0; i < sample.size(); ++i) rows[i] = static_cast<index_t>(sample[i]);
      const Matrix sub = p.A.matrix.subset_rows(rows);
      resid.resize(static_cast<std::size_t>(m));
      sub.matvec(x, resid);
      for (index_t i = 0; i < m; ++i)
        resid[static_cast<std::size_t>(i)] -= p.b[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])];
      sub.matvec_t(resid, grad);
      const double w = 1.0 / static_cast<double>(m);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * w * grad[j];
      project(x);
      dp += dp_step;
      if (dp >= next_log - 1e-12) {
        log.log(dp, x);
        next_log += 1.0;
      }
    }
    return {std::move(x), std::move(log.trace), {}};
  }

  const BlockSampler sampler = BlockSampler::build(p, cfg.sampling);
  const double eta =
      cfg.eta > 0.0 ? cfg.eta : 1.0 / batch_lipschitz(p.A, sampler.partition);
  double dp = 0.0;
  double next_log = 1.0;
  while (dp < static_cast<double>(cfg.epochs) - 1e-12) {
    const index_t k = static_cast<index_t>(rng.uniform_below(
        static_cast<std::uint64_t>(sampler.num_blocks())));
    sampler.block_gradient(k, x, resid, grad);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] -= eta * grad[j];
    project(x);
    dp += sampler.datapass[static_cast<std::size_t>(k)];
    if (dp >= next_log - 1e-12) {
      log.log(dp, x);
      next_log += 1.0;
    }
  }
  return {std::move(x), std::move(log.trace), {}};
}

SolveResult prox_svrg(const Problem& p, const SolverConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  validate_config(cfg);
  const SingleProx plan = single_prox_plan(p.reg, /*allow_tv_g=*/false);
  const BlockSampler sampler = BlockSampler::build(p, cfg.sampling);
  const double l_b = batch_lipschitz(p.A, sampler.partition);
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (3.0 * l_b);
  Rng rng = Rng::stream(cfg.seed, "prox_svrg");

  std::vector<double> x = initial_point(p, cfg);
  std::vector<double> snapshot = x;
  std::vector<double> full_grad(x.size());
  std::vector<double> resid(static_cast<std::size_t>(p.A.matrix.rows()));
  std::vector<double> g_cur(x.size()), g_snap(x.size());
  TraceLogger log(p);
  log.log(0.0, x);

  const index_t inner = sampler.num_blocks();
  double dp = 0.0;
  while (dp < static_cast<double>(cfg.epochs) - 1e-12) {
    snapshot = x;
    full_gradient(p, snapshot, resid, full_grad);
    dp += 1.0;  // snapshot costs one datapass
    for (index_t s = 0; s < inner; ++s) {
      const index_t k = static_cast<index_t>(
          rng.uniform_below(static_cast<std::uint64_t>(sampler.num_blocks())));
      sampler.block_gradient(k, x, resid, g_cur);
      sampler.block_gradient(k, snapshot, resid, g_snap);
      for (std::size_t j = 0; j < x.size(); ++j)
        x[j] -= eta * (g_cur[j] - g_snap[j] + full_grad[j]);
      x = apply_single_prox(p, plan, x, eta, cfg.tv_inner, 0.0);
      dp += sampler.datapass[static_cast<std::size_t>(k)];
    }
    log.log(dp, x);
  }
  return {std::move(x), std::move(log.trace), {}};
}

SolveResult pdhg(const Problem& p, const SolverConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  validate_config(cfg);
  const bool has_g = p.reg.g == GKind::kL1;
  const Matrix d_ident = Matrix::identity(p.A.matrix.cols());
  const Matrix& d_op = has_g && !p.reg.g_is_identity() ? *p.reg.d : d_ident;
  const double lambda = has_g ? p.reg.lambda : 0.0;
  const double d_norm_sq = lambda > 0.0 ? spectral_norm_sq(d_op) : 0.0;
  const double d_norm = std::sqrt(d_norm_sq);
  const double l_f = full_lipschitz(p.A);

  const double sigma = cfg.sigma > 0.0 ? cfg.sigma : (d_norm > 0.0 ? 1.0 / d_norm : 1.0);
  const double tau = cfg.tau > 0.0 ? cfg.tau : 1.0 / (d_norm + l_f);
  if (sigma * tau * d_norm_sq > 1.0 + 1e-12)
    throw std::invalid_argument("pdhg step condition sigma*tau*||D||^2 <= 1 violated");

  std::vector<double> x = initial_point(p, cfg);
  std::vector<double> z = x;
  std::vector<double> y(static_cast<std::size_t>(d_op.rows()), 0.0);
  std::vector<double> dz(y.size());
  std::vector<double> dty(x.size());
  std::vector<double> resid(static_cast<std::size_t>(p.A.matrix.rows()));
  std::vector<double> grad(x.size());
  TraceLogger log(p);
  log.log(0.0, x);

  for (index_t it = 1; it <= cfg.epochs; ++it) {
    // Dual ascent.
    d_op.matvec(z, dz);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += sigma * dz[i];
    prox_conjugate_l1_inplace(y, lambda);
    // Primal descent with the smooth term folded in.
    d_op.matvec_t(y, dty);
    full_gradient(p, x, resid, grad);
    std::vector<double> x_new(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) x_new[j] = x[j] - tau * (dty[j] + grad[j]);
    if (p.reg.h != HKind::kNone)
      x_new = prox_scaled(p.reg.h, p.reg, p.reg.gamma, x_new, tau);
    // Extrapolation, theta = 1.
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = 2.0 * x_new[j] - x[j];
    x = std::move(x_new);
    log.log(static_cast<double>(it), x);
  }
  return {std::move(x), std::move(log.trace), std::move(y)};
}

SolveResult acc_pd_sgd(const Problem& p, const SolverConfig& cfg) {
  if (cfg.epochs < 1 && cfg.outer_loops < 1)
    throw std::invalid_argument("need an epoch budget or explicit outer loop count");
  validate_config(cfg);
  const BlockSampler sampler = BlockSampler::build(p, cfg.sampling);
  const index_t num_blocks = sampler.num_blocks();

  const bool has_g = p.reg.g == GKind::kL1 && p.reg.lambda > 0.0;
  const Matrix d_ident = Matrix::identity(p.A.matrix.cols());
  const Matrix& d_op = has_g && !p.reg.g_is_identity() ? *p.reg.d : d_ident;
  const double lambda = has_g ? p.reg.lambda : 0.0;
  const double d_norm_sq = has_g ? spectral_norm_sq(d_op) : 0.0;
  const double d_norm = std::sqrt(d_norm_sq);
  const double l_b = batch_lipschitz(p.A, sampler.partition);

  const double alpha = cfg.alpha > 0.0 ? cfg.alpha : (d_norm > 0.0 ? 1.0 / d_norm : 1.0);
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / (l_b + d_norm_sq * alpha);
  const double theta = cfg.theta >= 0.0
                           ? cfg.theta
                           : static_cast<double>(num_blocks) / static_cast<double>(num_blocks + 1);
  const index_t n1 = cfg.inner_len > 0 ? cfg.inner_len : num_blocks;
  // With N1 inner steps of ~n/K rows each, one outer loop costs about
  // N1/K datapasses.
  const index_t n0 = cfg.outer_loops > 0
                         ? cfg.outer_loops
                         : static_cast<index_t>(std::ceil(
                               static_cast<double>(cfg.epochs) * static_cast<double>(num_blocks) /
                               static_cast<double>(n1)));

  Rng rng = Rng::stream(cfg.seed, "acc_pd_sgd");
  std::vector<double> x0 = initial_point(p, cfg);
  std::vector<double> v_prev = x0;   // v^{t-1}
  std::vector<double> v_prev2 = x0;  // v^{t-2}
  std::vector<double> x_outer = x0;  // x^{t-1}
  std::vector<double> xt(x0.size());
  std::vector<double> x_cur(x0.size()), x_next(x0.size()), z(x0.size());
  std::vector<double> y(static_cast<std::size_t>(d_op.rows()));
  std::vector<double> dz(y.size()), dty(x0.size());
  std::vector<double> resid, grad(x0.size());

  TraceLogger log(p);
  log.log(0.0, x0);
  double dp = 0.0;
  for (index_t t = 1; t <= n0; ++t) {
    // Katyusha-X outer momentum.
    const double td = static_cast<double>(t);
    const double c_v = 3.0 * td - 2.0, c_x = td, c_v2 = 2.0 * td - 4.0, denom = 2.0 * td + 2.0;
    for (std::size_t j = 0; j < xt.size(); ++j)
      xt[j] = (c_v * v_prev[j] + c_x * x_outer[j] - c_v2 * v_prev2[j]) / denom;

    x_cur = xt;
    z = xt;
    d_op.matvec(xt, y);  // y_0 = D x_0, reset every outer loop
    for (index_t k = 0; k < n1; ++k) {
      // Dual ascent.
      d_op.matvec(z, dz);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * dz[i];
      prox_conjugate_l1_inplace(y, lambda);
      // Stochastic primal descent.
      const index_t blk = static_cast<index_t>(
          rng.uniform_below(static_cast<std::uint64_t>(num_blocks)));
      sampler.block_gradient(blk, x_cur, resid, grad);
      d_op.matvec_t(y, dty);
      for (std::size_t j = 0; j < x_next.size(); ++j)
        x_next[j] = x_cur[j] - eta * (dty[j] + grad[j]);
      if (p.reg.h != HKind::kNone)
        x_next = prox_scaled(p.reg.h, p.reg, p.reg.gamma, x_next, eta);
      // Innerloop momentum.
      for (std::size_t j = 0; j < z.size(); ++j)
        z[j] = x_next[j] + theta * (x_next[j] - x_cur[j]);
      std::swap(x_cur, x_next);
      dp += sampler.datapass[static_cast<std::size_t>(blk)];
    }
    v_prev2 = v_prev;
    v_prev = x_cur;  // v^t = last inner iterate
    x_outer = xt;
    log.log(dp, v_prev);
  }
  return {v_prev, std::move(log.trace), y};
}

SolveResult run_solver(const Problem& p, const SolverConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::kPgd: return pgd(p, cfg);
    case Algorithm::kFista: return fista(p, cfg);
    case Algorithm::kMinibatchSgd: return minibatch_sgd(p, cfg);
    case Algorithm::kProxSvrg: return prox_svrg(p, cfg);
    case Algorithm::kPdhg: return pdhg(p, cfg);
    case Algorithm::kAccPdSgd: return acc_pd_sgd(p, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::vector<ExperimentEntry> run_experiment(const Problem& p,
                                            std::span<const SolverConfig> configs) {
  std::vector<ExperimentEntry> out;
  out.reserve(configs.size());
  for (const SolverConfig& cfg : configs) {
    ExperimentEntry entry;
    entry.config = cfg;
    try {
      entry.result = run_solver(p, cfg);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace stochascope
