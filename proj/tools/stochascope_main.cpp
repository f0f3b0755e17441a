// stochascope: SA-factor analysis and stochastic/deterministic proximal
// solvers for linear inverse problems.
//
//   stochascope synth              synthesize a problem bundle
//   stochascope analyze            SA curve + bounds for a bundle
//   stochascope compare-partitions rank partition schemes for a bundle
//   stochascope solve              run solver configs against a bundle
//
// STOCHASCOPE_THREADS caps the kernels' parallelism.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stochascope/commands.hpp"

namespace {

using stochascope::index_t;

std::vector<stochascope::PartitionScheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<stochascope::PartitionScheme> out;
  for (const std::string& n : names) out.push_back(stochascope::scheme_from_name(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SA-factor analysis and proximal solvers for linear inverse problems"};
  app.require_subcommand(1);

  // --- synth ---
  stochascope::SynthRequest synth;
  std::string synth_out;
  double synth_snr = std::numeric_limits<double>::quiet_NaN();
  auto* synth_cmd = app.add_subcommand("synth", "synthesize a problem bundle");
  synth_cmd->add_option("--kind", synth.generator.kind,
                        "gaussian|uniform01|wishart|blur|identity|identical_rows")
      ->required();
  synth_cmd->add_option("--rows", synth.generator.n, "row count n");
  synth_cmd->add_option("--cols", synth.generator.d, "column count d");
  synth_cmd->add_option("--mean", synth.generator.mean, "gaussian entry mean");
  synth_cmd->add_option("--var", synth.generator.var, "gaussian entry variance");
  synth_cmd->add_option("--d1", synth.generator.d1, "image rows (blur)");
  synth_cmd->add_option("--d2", synth.generator.d2, "image cols (blur)");
  synth_cmd->add_option("--r-min", synth.generator.r_min, "blur radius at the center");
  synth_cmd->add_option("--r-max", synth.generator.r_max, "blur radius at the corner");
  synth_cmd->add_option("--xtrue", synth.xtrue_kind, "gaussian|nonneg|piecewise");
  synth_cmd->add_option("--snr", synth_snr, "target log10(||Ax||^2/||w||^2); omit for noiseless");
  synth_cmd->add_option("--seed", synth.seed, "root seed");
  synth_cmd->add_option("--out-dir", synth_out, "bundle directory")->required();
  synth_cmd->add_option("--label", synth.label, "bundle label");
  synth_cmd->add_option("--g-term", synth.g_kind, "g term: none|l1");
  synth_cmd->add_option("--lambda", synth.lambda, "g weight");
  synth_cmd->add_option("--g-op", synth.g_op, "g linear map: identity|tv");
  synth_cmd->add_option("--h-term", synth.h_kind, "h term: none|l1|nonneg|box");
  synth_cmd->add_option("--gamma", synth.gamma, "h weight");
  synth_cmd->add_option("--box-lo", synth.box_lo, "box lower bound");
  synth_cmd->add_option("--box-hi", synth.box_hi, "box upper bound");

  // --- analyze ---
  stochascope::AnalyzeRequest analyze;
  std::string analyze_bundle, analyze_out;
  std::vector<std::string> analyze_schemes = {"interleaved"};
  auto* analyze_cmd = app.add_subcommand("analyze", "SA curve and bounds for a bundle");
  analyze_cmd->add_option("--bundle", analyze_bundle, "bundle directory")->required();
  analyze_cmd->add_option("--k-list", analyze.k_list, "minibatch counts K")
      ->required()
      ->delimiter(',');
  analyze_cmd->add_option("--scheme", analyze_schemes, "interleaved|random|consecutive")
      ->delimiter(',');
  analyze_cmd->add_option("--delta", analyze.deltas, "alpha_r deltas (json output)")
      ->delimiter(',');
  analyze_cmd->add_option("--format", analyze.format, "csv|json|both");
  analyze_cmd->add_option("--seed", analyze.seed, "seed for random partitions");
  analyze_cmd->add_option("--out-dir", analyze_out, "report directory")->required();

  // --- compare-partitions ---
  std::string cmp_bundle, cmp_out;
  index_t cmp_k = 0;
  std::uint64_t cmp_seed = 0;
  std::vector<std::string> cmp_schemes = {"interleaved", "random", "consecutive"};
  auto* cmp_cmd = app.add_subcommand("compare-partitions", "rank partition schemes");
  cmp_cmd->add_option("--bundle", cmp_bundle, "bundle directory")->required();
  cmp_cmd->add_option("--k", cmp_k, "minibatch count K")->required();
  cmp_cmd->add_option("--scheme", cmp_schemes, "schemes to rank")->delimiter(',');
  cmp_cmd->add_option("--seed", cmp_seed, "seed for random partitions");
  cmp_cmd->add_option("--out-dir", cmp_out, "report directory")->required();

  // --- solve ---
  std::string solve_bundle, solve_configs, solve_out;
  auto* solve_cmd = app.add_subcommand("solve", "run solver configs against a bundle");
  solve_cmd->add_option("--bundle", solve_bundle, "bundle directory")->required();
  solve_cmd->add_option("--configs", solve_configs, "JSON file with a 'configs' array")
      ->required();
  solve_cmd->add_option("--out-dir", solve_out, "trace directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      if (!std::isnan(synth_snr)) synth.snr = synth_snr;
      synth.out_dir = synth_out;
      stochascope::cmd_synth(synth);
      std::cout << "bundle written to " << synth_out << "\n";
      return 0;
    }
    if (analyze_cmd->parsed()) {
      analyze.schemes = parse_schemes(analyze_schemes);
      analyze.out_dir = analyze_out;
      stochascope::cmd_analyze(analyze_bundle, analyze);
      std::cout << "analysis written to " << analyze_out << "\n";
      return 0;
    }
    if (cmp_cmd->parsed()) {
      const auto schemes = parse_schemes(cmp_schemes);
      const auto ranking =
          stochascope::cmd_compare_partitions(cmp_bundle, cmp_k, schemes, cmp_seed, cmp_out);
      for (std::size_t i = 0; i < ranking.size(); ++i)
        std::printf("%zu. %-12s alpha_ell=%.6g upsilon=%.6g\n", i + 1,
                    ranking[i].scheme.c_str(), ranking[i].alpha_ell, ranking[i].upsilon);
      return 0;
    }
    if (solve_cmd->parsed()) {
      const bool ok = stochascope::cmd_solve(solve_bundle, solve_configs, solve_out);
      std::cout << "traces written to " << solve_out << (ok ? "" : " (with failures)") << "\n";
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
