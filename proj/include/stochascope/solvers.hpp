#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochascope/partitions.hpp"
#include "stochascope/prox.hpp"

namespace stochascope {

// A regularized linear inverse problem: data (A, b), optional ground truth,
// and the composite regularizer lambda*g(Dx) + gamma*h(x).
struct Problem {
  ForwardOperator A;
  std::vector<double> b;
  std::optional<std::vector<double>> x_true;
  RegularizerSpec reg;
  std::optional<double> noise_norm;
  std::optional<double> true_residual_norm;  // ||b - A x_true||, set by make_problem
};

Problem make_problem(ForwardOperator a, std::vector<double> b,
                     std::optional<std::vector<double>> x_true = std::nullopt,
                     RegularizerSpec reg = {},
                     std::optional<double> noise_norm = std::nullopt);

enum class Algorithm { kPgd, kFista, kMinibatchSgd, kProxSvrg, kPdhg, kAccPdSgd };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

// Minibatch source: a disjoint row partition (block picked uniformly per
// step) or uniform with-replacement sampling of m-row subsets.
struct SamplingSpec {
  bool with_replacement = false;
  index_t m = 1;  // with-replacement batch size
  PartitionScheme scheme = PartitionScheme::kInterleaved;
  index_t K = 1;
  std::optional<std::uint64_t> partition_seed;
  std::optional<Partition> explicit_blocks;  // overrides scheme/K when set
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::kPgd;
  double eta = 0.0;    // 0 = per-algorithm default step
  double sigma = 0.0;  // pdhg dual step (0 = default)
  double tau = 0.0;    // pdhg primal step (0 = default)
  double alpha = 0.0;  // acc_pd_sgd dual step alpha_l (0 = default 1/||D||)
  double theta = -1.0; // acc_pd_sgd inner momentum (<0 = default K/(K+1))
  SamplingSpec sampling;
  index_t epochs = 1;       // datapass budget
  std::uint64_t seed = 0;
  index_t inner_len = 0;    // acc_pd_sgd N1 (0 = default K)
  index_t outer_loops = 0;  // acc_pd_sgd N0 (0 = derived from epochs)
  index_t tv_inner = 50;    // fista TV prox budget
  std::optional<std::vector<double>> x0;  // default: backprojection A^T b / n
};

// One row of the per-epoch solver log. epoch counts datapasses (n stochastic
// row-gradient evaluations each) and may be fractional.
struct TraceRecord {
  double epoch = 0.0;
  double objective = 0.0;
  double est_error = 0.0;  // ||x - x_true||^2, NaN when x_true is unknown
  double wall_ms = 0.0;
};

struct Trace {
  std::vector<TraceRecord> records;
  bool est_error_available = false;
};

struct SolveResult {
  std::vector<double> x;
  Trace trace;
  std::vector<double> dual;  // final dual iterate of the primal-dual solvers
};

// F(x) = (1/2n)||Ax - b||^2 + lambda*||Dx||_1 + gamma*h(x); indicator h
// terms contribute zero at feasible points.
double objective_value(const Problem& p, std::span<const double> x);

// (1/n) A^T (A x - b).
std::vector<double> full_gradient_value(const Problem& p, std::span<const double> x);

// The partition minibatch gradient estimator (K/n)(S^k A)^T (S^k A x - S^k b);
// averaging it uniformly over k gives the full gradient for any block sizes.
std::vector<double> partition_block_gradient(const Problem& p, const Partition& part,
                                             index_t k, std::span<const double> x);

// The with-replacement estimator (1/m)(S A)^T (S A x - S b) over explicit rows.
std::vector<double> subset_gradient(const Problem& p, std::span<const index_t> rows,
                                    std::span<const double> x);

SolveResult pgd(const Problem& p, const SolverConfig& cfg);
SolveResult fista(const Problem& p, const SolverConfig& cfg);
SolveResult minibatch_sgd(const Problem& p, const SolverConfig& cfg);
SolveResult prox_svrg(const Problem& p, const SolverConfig& cfg);
SolveResult pdhg(const Problem& p, const SolverConfig& cfg);
SolveResult acc_pd_sgd(const Problem& p, const SolverConfig& cfg);

SolveResult run_solver(const Problem& p, const SolverConfig& cfg);

// Runs every config against the same immutable problem; a failing config is
// recorded without aborting its siblings.
struct ExperimentEntry {
  SolverConfig config;
  std::optional<SolveResult> result;
  std::string error;  // empty on success
};

std::vector<ExperimentEntry> run_experiment(const Problem& p,
                                            std::span<const SolverConfig> configs);

}  // namespace stochascope
