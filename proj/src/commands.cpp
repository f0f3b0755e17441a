#include "stochascope/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stochascope/rng.hpp"
#include "stochascope/trace_io.hpp"

namespace stochascope {

namespace {

std::vector<double> make_x_true(const std::string& kind, const ForwardOperator& op,
                                std::uint64_t seed) {
  const index_t d = op.matrix.cols();
  Rng rng = Rng::stream(seed, "x_true");
  std::vector<double> x(static_cast<std::size_t>(d));
  if (kind == "gaussian") {
    for (double& v : x) v = rng.normal();
    return x;
  }
  if (kind == "nonneg") {
    for (double& v : x) v = std::abs(rng.normal());
    return x;
  }
  if (kind == "piecewise") {
    // Piecewise-constant ground truth, the natural fixture for TV
    // regularizers: random rectangles on image grids, random index runs
    // otherwise.
    if (op.image_shape) {
      const auto [d1, d2] = *op.image_shape;
      std::fill(x.begin(), x.end(), 0.2);
      const int patches = 4;
      for (int p = 0; p < patches; ++p) {
        const index_t r0 = static_cast<index_t>(rng.uniform_below(static_cast<std::uint64_t>(d1)));
        const index_t c0 = static_cast<index_t>(rng.uniform_below(static_cast<std::uint64_t>(d2)));
        const index_t h = 1 + static_cast<index_t>(rng.uniform_below(
                                  static_cast<std::uint64_t>(std::max<index_t>(1, d1 / 2))));
        const index_t w = 1 + static_cast<index_t>(rng.uniform_below(
                                  static_cast<std::uint64_t>(std::max<index_t>(1, d2 / 2))));
        const double level = 0.2 + 0.8 * rng.uniform01();
        for (index_t j = c0; j < std::min(d2, c0 + w); ++j)
          for (index_t i = r0; i < std::min(d1, r0 + h); ++i)
            x[static_cast<std::size_t>(j * d1 + i)] = level;
      }
      return x;
    }
    const int runs = 5;
    index_t pos = 0;
    for (int p = 0; p < runs && pos < d; ++p) {
      const index_t len = std::max<index_t>(
          1, static_cast<index_t>(rng.uniform_below(static_cast<std::uint64_t>(d))) / runs);
      const double level = rng.normal();
      for (index_t i = pos; i < std::min(d, pos + len); ++i)
        x[static_cast<std::size_t>(i)] = level;
      pos += len;
    }
    return x;
  }
  throw std::invalid_argument("unknown x_true kind '" + kind + "'");
}

RegularizerSpec regularizer_from_request(const SynthRequest& req, const ForwardOperator& op) {
  RegularizerSpec reg;
  if (req.g_kind == "l1") {
    reg.g = GKind::kL1;
    reg.lambda = req.lambda;
    if (req.g_op == "tv") {
      if (!op.image_shape)
        throw std::invalid_argument("tv regularizer needs an image-shaped operator");
      reg.d = std::make_shared<Matrix>(
          diff_operator(op.image_shape->first, op.image_shape->second));
    } else if (req.g_op != "identity") {
      throw std::invalid_argument("unknown g op '" + req.g_op + "'");
    }
  } else if (req.g_kind != "none") {
    throw std::invalid_argument("unknown g kind '" + req.g_kind + "'");
  }
  if (req.h_kind == "l1")
    reg.h = HKind::kL1;
  else if (req.h_kind == "nonneg")
    reg.h = HKind::kNonneg;
  else if (req.h_kind == "box")
    reg.h = HKind::kBox;
  else if (req.h_kind != "none")
    throw std::invalid_argument("unknown h kind '" + req.h_kind + "'");
  reg.gamma = req.gamma;
  reg.box_lo = req.box_lo;
  reg.box_hi = req.box_hi;
  reg.validate(op.matrix.cols());
  return reg;
}

}  // namespace

void cmd_synth(const SynthRequest& req) {
  ForwardOperator op = build_from_generator(req.generator, req.seed);
  const RegularizerSpec reg = regularizer_from_request(req, op);
  std::vector<double> x_true = make_x_true(req.xtrue_kind, op, req.seed);
  std::vector<double> b = op.matrix.apply(x_true);

  std::optional<double> snr_achieved;
  std::optional<double> noise_norm;
  if (req.snr) {
    const double signal_sq = [&] {
      double s = 0.0;
      for (double v : b) s += v * v;
      return s;
    }();
    if (signal_sq == 0.0) throw std::invalid_argument("cannot target an SNR: A x_true is zero");
    Rng rng = Rng::stream(req.seed, "noise");
    std::vector<double> w(b.size());
    double w_sq = 0.0;
    for (double& v : w) {
      v = rng.normal();
      w_sq += v * v;
    }
    // Scale w so that log10(||Ax||^2 / ||w||^2) hits the requested SNR.
    const double target_sq = signal_sq / std::pow(10.0, *req.snr);
    const double scale = std::sqrt(target_sq / w_sq);
    double achieved_sq = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double wi = scale * w[i];
      b[i] += wi;
      achieved_sq += wi * wi;
    }
    snr_achieved = std::log10(signal_sq / achieved_sq);
    noise_norm = std::sqrt(achieved_sq);
  }

  BundleWriteRequest wr;
  wr.label = req.label.empty() ? op.label : req.label;
  wr.seed = req.seed;
  wr.generator = req.generator;
  wr.regularizer = regularizer_to_json(reg, req.g_op == "tv");
  wr.snr_requested = req.snr;
  wr.snr_achieved = snr_achieved;
  wr.noise_norm = noise_norm;
  save_bundle(req.out_dir, op, b, x_true, wr);
}

void cmd_analyze(const std::filesystem::path& bundle_dir, const AnalyzeRequest& req) {
  if (req.k_list.empty()) throw std::invalid_argument("K list must be nonempty");
  const Bundle bundle = load_bundle(bundle_dir);
  const OperatorStats stats = compute_operator_stats(bundle.op);

  std::vector<SAReport> reports;
  nlohmann::ordered_json extra_deltas = nlohmann::ordered_json::array();
  for (const PartitionScheme scheme : req.schemes) {
    for (const index_t k : req.k_list) {
      const Partition part = make_partition(
          scheme, bundle.op.matrix.rows(), k,
          scheme == PartitionScheme::kRandom ? std::optional<std::uint64_t>(req.seed)
                                             : std::nullopt);
      reports.push_back(sa_factor(bundle.op, stats, part));
      nlohmann::ordered_json per_delta = nlohmann::ordered_json::array();
      for (double delta : req.deltas) {
        const DeltaBound bd = bound_alpha_r(stats, k, delta);
        nlohmann::ordered_json d;
        d["delta"] = bd.delta;
        d["alpha_r"] = bd.value;
        d["probability"] = bd.probability;
        per_delta.push_back(std::move(d));
      }
      nlohmann::ordered_json row;
      row["K"] = k;
      row["scheme"] = scheme_name(scheme);
      row["alpha_r"] = std::move(per_delta);
      extra_deltas.push_back(std::move(row));
    }
  }

  std::filesystem::create_directories(req.out_dir);
  const bool csv = req.format == "csv" || req.format == "both";
  const bool json = req.format == "json" || req.format == "both";
  if (!csv && !json) throw std::invalid_argument("format must be csv, json or both");
  if (csv) write_sa_reports_csv(req.out_dir / "sa_curve.csv", reports);
  if (json) {
    nlohmann::ordered_json j;
    j["schema"] = "stochascope-sa-curve v1";
    j["bundle"] = bundle_dir.string();
    j["seed"] = req.seed;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const SAReport& r : reports) rows.push_back(sa_report_to_json(r));
    j["reports"] = std::move(rows);
    j["alpha_r_deltas"] = std::move(extra_deltas);
    write_json_atomic(req.out_dir / "sa_curve.json", j);
  }
}

std::vector<SchemeRanking> cmd_compare_partitions(const std::filesystem::path& bundle_dir,
                                                  index_t k,
                                                  std::span<const PartitionScheme> schemes,
                                                  std::uint64_t seed,
                                                  const std::filesystem::path& out_dir) {
  if (schemes.empty()) throw std::invalid_argument("need at least one scheme");
  const Bundle bundle = load_bundle(bundle_dir);
  const OperatorStats stats = compute_operator_stats(bundle.op);

  std::vector<SchemeRanking> ranking;
  for (const PartitionScheme scheme : schemes) {
    const Partition part = make_partition(
        scheme, bundle.op.matrix.rows(), k,
        scheme == PartitionScheme::kRandom ? std::optional<std::uint64_t>(seed) : std::nullopt);
    const SAReport r = sa_factor(bundle.op, stats, part);
    ranking.push_back({r.scheme, r.alpha_ell, r.upsilon});
  }
  std::sort(ranking.begin(), ranking.end(), [](const SchemeRanking& a, const SchemeRanking& b) {
    if (a.alpha_ell != b.alpha_ell) return a.alpha_ell > b.alpha_ell;
    return a.scheme < b.scheme;
  });

  std::filesystem::create_directories(out_dir);
  nlohmann::ordered_json j;
  j["schema"] = "stochascope-compare v1";
  j["bundle"] = bundle_dir.string();
  j["K"] = k;
  j["seed"] = seed;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SchemeRanking& r : ranking) {
    nlohmann::ordered_json row;
    row["scheme"] = r.scheme;
    row["alpha_ell"] = r.alpha_ell;
    row["upsilon"] = r.upsilon;
    rows.push_back(std::move(row));
  }
  j["ranking"] = std::move(rows);
  write_json_atomic(out_dir / "compare.json", j);
  return ranking;
}

bool cmd_solve(const std::filesystem::path& bundle_dir,
               const std::filesystem::path& configs_file,
               const std::filesystem::path& out_dir) {
  const Bundle bundle = load_bundle(bundle_dir);
  const Problem problem = bundle.to_problem();

  const nlohmann::ordered_json cj = read_json(configs_file);
  if (!cj.contains("configs") || !cj.at("configs").is_array())
    throw std::runtime_error("configs file needs a top-level 'configs' array");
  std::vector<SolverConfig> configs;
  for (const auto& c : cj.at("configs")) configs.push_back(solver_config_from_json(c));

  const std::vector<ExperimentEntry> entries = run_experiment(problem, configs);

  std::filesystem::create_directories(out_dir);
  nlohmann::ordered_json combined;
  combined["schema"] = "stochascope-solve v1";
  combined["bundle"] = bundle_dir.string();
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ExperimentEntry& e = entries[i];
    char name[64];
    std::snprintf(name, sizeof name, "trace_%03zu_%s.csv", i,
                  algorithm_name(e.config.algorithm).c_str());
    nlohmann::ordered_json row;
    row["config"] = solver_config_to_json(e.config);
    if (e.result) {
      write_trace_csv(out_dir / name, e.result->trace);
      row["status"] = "ok";
      row["trace_file"] = name;
      row["trace"] = trace_to_json(e.result->trace);
    } else {
      row["status"] = "error";
      row["error"] = e.error;
      all_ok = false;
    }
    results.push_back(std::move(row));
  }
  combined["results"] = std::move(results);
  write_json_atomic(out_dir / "solve.json", combined);
  return all_ok;
}

}  // namespace stochascope
