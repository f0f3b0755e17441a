#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "stochascope/commands.hpp"
#include "stochascope/trace_io.hpp"

using namespace stochascope;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Strip the wall_ms column (the last CSV field), which is exempt from the
// determinism contract.
std::string strip_wall(const std::string& csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    std::string line = csv.substr(pos, eol - pos);
    if (!line.empty() && line[0] != '#') {
      const std::size_t comma = line.rfind(',');
      if (comma != std::string::npos) line = line.substr(0, comma);
    }
    out += line;
    out += '\n';
    pos = eol + 1;
  }
  return out;
}

SynthRequest gaussian_request(const fs::path& dir, std::uint64_t seed) {
  SynthRequest req;
  req.generator.kind = "gaussian";
  req.generator.n = 20;
  req.generator.d = 12;
  req.seed = seed;
  req.out_dir = dir;
  return req;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("synth is reproducible byte for byte at a fixed seed") {
  const fs::path a = fresh_dir("sx_synth_a");
  const fs::path b = fresh_dir("sx_synth_b");
  cmd_synth(gaussian_request(a, 7));
  cmd_synth(gaussian_request(b, 7));
  for (const char* f : {"operator.mtx", "b.mtx", "x_true.mtx", "manifest.json"})
    CHECK(slurp(a / f) == slurp(b / f));
  const fs::path c = fresh_dir("sx_synth_c");
  cmd_synth(gaussian_request(c, 8));
  CHECK(slurp(a / "operator.mtx") != slurp(c / "operator.mtx"));
}

TEST_CASE("bundle reload reproduces the matrix and checks digests") {
  const fs::path dir = fresh_dir("sx_reload");
  cmd_synth(gaussian_request(dir, 7));
  const Bundle bundle = load_bundle(dir);
  const auto regenerated = build_from_generator(GeneratorSpec::from_json(bundle.manifest.at("generator")), 7);
  SUBCASE("reload equals regeneration bit for bit") {
    REQUIRE(bundle.op.matrix.rows() == regenerated.matrix.rows());
    for (index_t i = 0; i < bundle.op.matrix.rows(); ++i)
      for (index_t j = 0; j < bundle.op.matrix.cols(); ++j)
        CHECK(bundle.op.matrix.at(i, j) == regenerated.matrix.at(i, j));
  }
  SUBCASE("tampering the operator file is caught, never silent") {
    std::ofstream out(dir / "operator.mtx", std::ios::app);
    out << "% tampered\n";
    out.close();
    CHECK_THROWS_WITH_AS((void)load_bundle(dir), doctest::Contains("digest mismatch"),
                         std::runtime_error);
  }
}

TEST_CASE("synth hits the requested snr within 0.05") {
  SynthRequest req;
  req.generator.kind = "blur";
  req.generator.d1 = 32;
  req.generator.d2 = 32;
  req.generator.r_min = 0.0;
  req.generator.r_max = 3.0;
  req.xtrue_kind = "piecewise";
  req.snr = 3.0;
  req.seed = 5;
  req.out_dir = fresh_dir("sx_snr");
  cmd_synth(req);
  const Bundle bundle = load_bundle(req.out_dir);
  const double achieved = bundle.manifest.at("snr_achieved").get<double>();
  CHECK(std::abs(achieved - 3.0) <= 0.05);
  CHECK(bundle.noise_norm.has_value());
  CHECK(bundle.op.image_shape.has_value());
}

TEST_CASE("an ingested bundle without ground truth marks est_error unavailable") {
  const fs::path dir = fresh_dir("sx_ingest");
  const auto op = build_random_ensemble({EnsembleKind::kUniform01}, 8, 6, 2);
  const auto b = oracles::random_vector(3, 8);
  BundleWriteRequest wr;
  wr.label = "ingested";
  wr.regularizer = regularizer_to_json(RegularizerSpec{}, false);
  save_bundle(dir, op, b, std::nullopt, wr);
  const Bundle bundle = load_bundle(dir);
  CHECK_FALSE(bundle.manifest.at("est_error_available").get<bool>());
  const Problem p = bundle.to_problem();
  SolverConfig cfg;
  cfg.epochs = 2;
  const SolveResult r = pgd(p, cfg);
  CHECK_FALSE(r.trace.est_error_available);
  CHECK(std::isnan(r.trace.records.back().est_error));
}

TEST_CASE("analyze: identical-rows upsilon column equals K, identity is flat 1") {
  SynthRequest same;
  same.generator.kind = "identical_rows";
  same.generator.n = 12;
  same.generator.d = 5;
  same.seed = 4;
  same.out_dir = fresh_dir("sx_rows");
  cmd_synth(same);
  AnalyzeRequest req;
  req.k_list = {1, 2, 4, 6};
  req.schemes = {PartitionScheme::kInterleaved};
  req.format = "json";
  req.out_dir = fresh_dir("sx_rows_rep");
  cmd_analyze(same.out_dir, req);
  const auto j = read_json(req.out_dir / "sa_curve.json");
  for (const auto& row : j.at("reports")) {
    CHECK(row.at("upsilon").get<double>() ==
          doctest::Approx(row.at("K").get<double>()).epsilon(1e-10));
  }

  SynthRequest id;
  id.generator.kind = "identity";
  id.generator.n = 12;
  id.seed = 4;
  id.out_dir = fresh_dir("sx_id");
  cmd_synth(id);
  req.out_dir = fresh_dir("sx_id_rep");
  cmd_analyze(id.out_dir, req);
  const auto ji = read_json(req.out_dir / "sa_curve.json");
  for (const auto& row : ji.at("reports"))
    CHECK(row.at("upsilon").get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("compare-partitions: single scheme ranks first; identity ties break by name") {
  SynthRequest id;
  id.generator.kind = "identity";
  id.generator.n = 16;
  id.seed = 1;
  id.out_dir = fresh_dir("sx_cmp_id");
  cmd_synth(id);

  const PartitionScheme one[] = {PartitionScheme::kConsecutive};
  const auto single =
      cmd_compare_partitions(id.out_dir, 4, one, 0, fresh_dir("sx_cmp_one"));
  REQUIRE(single.size() == 1);
  CHECK(single[0].scheme == "consecutive");

  const PartitionScheme all[] = {PartitionScheme::kInterleaved, PartitionScheme::kRandom,
                                 PartitionScheme::kConsecutive};
  const auto tie = cmd_compare_partitions(id.out_dir, 4, all, 3, fresh_dir("sx_cmp_tie"));
  REQUIRE(tie.size() == 3);
  CHECK(tie[0].scheme == "consecutive");
  CHECK(tie[1].scheme == "interleaved");
  CHECK(tie[2].scheme == "random");
  for (const auto& r : tie) CHECK(r.upsilon == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("solve: pgd on the identity nails the truth and repeats byte-identically") {
  SynthRequest id;
  id.generator.kind = "identity";
  id.generator.n = 10;
  id.seed = 2;
  id.out_dir = fresh_dir("sx_solve_id");
  cmd_synth(id);

  const fs::path cfg_file = fs::temp_directory_path() / "sx_configs.json";
  {
    nlohmann::ordered_json configs;
    configs["configs"] = nlohmann::ordered_json::array();
    SolverConfig pgd_cfg;
    pgd_cfg.epochs = 3;
    configs["configs"].push_back(solver_config_to_json(pgd_cfg));
    write_json_atomic(cfg_file, configs);
  }
  const fs::path out_a = fresh_dir("sx_solve_a");
  const fs::path out_b = fresh_dir("sx_solve_b");
  CHECK(cmd_solve(id.out_dir, cfg_file, out_a));
  CHECK(cmd_solve(id.out_dir, cfg_file, out_b));

  const std::string csv_a = slurp(out_a / "trace_000_pgd.csv");
  CHECK(strip_wall(csv_a) == strip_wall(slurp(out_b / "trace_000_pgd.csv")));

  // est_error hits exact recovery within 3 epochs.
  const auto j = read_json(out_a / "solve.json");
  const auto& records = j.at("results").at(0).at("trace").at("records");
  CHECK(records.back().at("est_error").get<double>() <= 1e-20);
}

TEST_CASE("solve reports per-config failures and a nonzero aggregate") {
  SynthRequest id;
  id.generator.kind = "identity";
  id.generator.n = 6;
  id.seed = 2;
  id.out_dir = fresh_dir("sx_solve_fail");
  cmd_synth(id);
  const fs::path cfg_file = fs::temp_directory_path() / "sx_configs_fail.json";
  {
    nlohmann::ordered_json configs;
    configs["configs"] = nlohmann::ordered_json::array();
    SolverConfig ok;
    ok.epochs = 2;
    configs["configs"].push_back(solver_config_to_json(ok));
    SolverConfig bad;
    bad.algorithm = Algorithm::kMinibatchSgd;
    bad.sampling.K = 100;  // K > n
    bad.epochs = 2;
    nlohmann::ordered_json bad_json = solver_config_to_json(bad);
    configs["configs"].push_back(bad_json);
    write_json_atomic(cfg_file, configs);
  }
  const fs::path out = fresh_dir("sx_solve_fail_out");
  CHECK_FALSE(cmd_solve(id.out_dir, cfg_file, out));
  const auto j = read_json(out / "solve.json");
  CHECK(j.at("results").at(0).at("status") == "ok");
  CHECK(j.at("results").at(1).at("status") == "error");
  CHECK_FALSE(j.at("results").at(1).at("error").get<std::string>().empty());
}

TEST_CASE("support-mask regularizer round-trips through a bundle") {
  const fs::path dir = fresh_dir("sx_support");
  const auto op = build_random_ensemble({EnsembleKind::kGaussian, 0.0, 1.0}, 6, 4, 12);
  RegularizerSpec reg;
  reg.h = HKind::kSupport;
  reg.support_mask = {1, 0, 1, 0};
  BundleWriteRequest wr;
  wr.label = "support";
  wr.regularizer = regularizer_to_json(reg, false);
  save_bundle(dir, op, oracles::random_vector(13, 6), std::nullopt, wr);
  const Bundle bundle = load_bundle(dir);
  CHECK(bundle.reg.h == HKind::kSupport);
  CHECK(bundle.reg.support_mask == std::vector<char>{1, 0, 1, 0});
}

TEST_CASE("solver config json round-trips") {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::kAccPdSgd;
  cfg.epochs = 30;
  cfg.seed = 12;
  cfg.eta = 0.5;
  cfg.alpha = 0.25;
  cfg.theta = 0.9;
  cfg.inner_len = 10;
  cfg.sampling.scheme = PartitionScheme::kInterleaved;
  cfg.sampling.K = 10;
  const SolverConfig back = solver_config_from_json(solver_config_to_json(cfg));
  CHECK(back.algorithm == cfg.algorithm);
  CHECK(back.epochs == cfg.epochs);
  CHECK(back.seed == cfg.seed);
  CHECK(back.eta == cfg.eta);
  CHECK(back.alpha == cfg.alpha);
  CHECK(back.theta == cfg.theta);
  CHECK(back.inner_len == cfg.inner_len);
  CHECK(back.sampling.K == cfg.sampling.K);
}

TEST_CASE("pdhg traces on a tv bundle align with acc-pd-sgd epoch grids") {
  SynthRequest blur;
  blur.generator.kind = "blur";
  blur.generator.d1 = 8;
  blur.generator.d2 = 8;
  blur.generator.r_min = 0.0;
  blur.generator.r_max = 2.0;
  blur.xtrue_kind = "piecewise";
  blur.g_kind = "l1";
  blur.lambda = 1e-3;
  blur.g_op = "tv";
  blur.seed = 9;
  blur.out_dir = fresh_dir("sx_blur_tv");
  cmd_synth(blur);

  const fs::path cfg_file = fs::temp_directory_path() / "sx_configs_tv.json";
  {
    nlohmann::ordered_json configs;
    configs["configs"] = nlohmann::ordered_json::array();
    SolverConfig fista_cfg;
    fista_cfg.algorithm = Algorithm::kFista;
    fista_cfg.epochs = 5;
    configs["configs"].push_back(solver_config_to_json(fista_cfg));
    SolverConfig acc;
    acc.algorithm = Algorithm::kAccPdSgd;
    acc.epochs = 5;
    acc.seed = 3;
    acc.sampling.scheme = PartitionScheme::kInterleaved;
    acc.sampling.K = 8;
    configs["configs"].push_back(solver_config_to_json(acc));
    write_json_atomic(cfg_file, configs);
  }
  const fs::path out = fresh_dir("sx_blur_tv_out");
  REQUIRE(cmd_solve(blur.out_dir, cfg_file, out));
  CHECK(fs::exists(out / "trace_000_fista.csv"));
  CHECK(fs::exists(out / "trace_001_acc_pd_sgd.csv"));
  const auto j = read_json(out / "solve.json");
  const auto& fista_records = j.at("results").at(0).at("trace").at("records");
  const auto& acc_records = j.at("results").at(1).at("trace").at("records");
  REQUIRE(fista_records.size() == acc_records.size());
  for (std::size_t i = 0; i < fista_records.size(); ++i)
    CHECK(fista_records.at(i).at("epoch").get<double>() ==
          doctest::Approx(acc_records.at(i).at("epoch").get<double>()));
}

}  // TEST_SUITE
