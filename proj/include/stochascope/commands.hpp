#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stochascope/bundle.hpp"

namespace stochascope {

// Library-level bodies of the CLI verbs. The binary in tools/ is a thin
// argument parser over these, so everything here is testable in-process.

struct SynthRequest {
  GeneratorSpec generator;
  std::string xtrue_kind = "gaussian";  // gaussian | nonneg | piecewise
  std::optional<double> snr;            // log10(||A x||^2 / ||w||^2); absent = noiseless
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::string label;
  // Regularizer recorded into the bundle.
  std::string g_kind = "none";  // none | l1
  double lambda = 0.0;
  std::string g_op = "identity";  // identity | tv
  std::string h_kind = "none";    // none | l1 | nonneg | box
  double gamma = 0.0;
  double box_lo = 0.0;
  double box_hi = 0.0;
};

// Writes operator.mtx, b.mtx, x_true.mtx and manifest.json; deterministic
// per seed.
void cmd_synth(const SynthRequest& req);

struct AnalyzeRequest {
  std::vector<index_t> k_list;
  std::vector<PartitionScheme> schemes;
  std::vector<double> deltas = {15.0, 2.0};  // extra alpha_r deltas (json output)
  std::string format = "csv";                // csv | json | both
  std::uint64_t seed = 0;                    // random-scheme partitions
  std::filesystem::path out_dir;
};

// SA curve + every bound per K and scheme -> sa_curve.csv / sa_curve.json.
void cmd_analyze(const std::filesystem::path& bundle_dir, const AnalyzeRequest& req);

// Schemes ranked by alpha_ell (Upsilon reported alongside); ties broken by
// scheme name. Writes compare.json and returns the ranking.
struct SchemeRanking {
  std::string scheme;
  double alpha_ell = 0.0;
  double upsilon = 0.0;
};

std::vector<SchemeRanking> cmd_compare_partitions(const std::filesystem::path& bundle_dir,
                                                  index_t k,
                                                  std::span<const PartitionScheme> schemes,
                                                  std::uint64_t seed,
                                                  const std::filesystem::path& out_dir);

// Runs every config in the JSON file against the bundle; one CSV trace per
// config plus a combined solve.json. Returns false when any config failed
// (per-config errors are recorded in the JSON).
bool cmd_solve(const std::filesystem::path& bundle_dir,
               const std::filesystem::path& configs_file,
               const std::filesystem::path& out_dir);

}  // namespace stochascope
