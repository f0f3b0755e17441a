#include "stochascope/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stochascope {

std::string format_double17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  out << kTraceCsvSchema << "\n";
  out << "epoch,objective,est_error,wall_ms\n";
  for (const TraceRecord& r : trace.records) {
    out << format_double17(r.epoch) << "," << format_double17(r.objective) << ","
        << format_double17(r.est_error) << "," << format_double17(r.wall_ms) << "\n";
  }
  return out.str();
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  write_text_atomic(path, trace_to_csv(trace));
}

nlohmann::ordered_json trace_to_json(const Trace& trace) {
  nlohmann::ordered_json j;
  j["est_error_available"] = trace.est_error_available;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const TraceRecord& r : trace.records) {
    nlohmann::ordered_json rec;
    rec["epoch"] = r.epoch;
    rec["objective"] = r.objective;
    if (std::isnan(r.est_error))
      rec["est_error"] = nullptr;
    else
      rec["est_error"] = r.est_error;
    rec["wall_ms"] = r.wall_ms;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  return j;
}

nlohmann::ordered_json solver_config_to_json(const SolverConfig& cfg) {
  nlohmann::ordered_json j;
  j["algorithm"] = algorithm_name(cfg.algorithm);
  j["epochs"] = cfg.epochs;
  j["seed"] = cfg.seed;
  j["eta"] = cfg.eta;
  j["sigma"] = cfg.sigma;
  j["tau"] = cfg.tau;
  j["alpha"] = cfg.alpha;
  j["theta"] = cfg.theta;
  j["inner_len"] = cfg.inner_len;
  j["outer_loops"] = cfg.outer_loops;
  j["tv_inner"] = cfg.tv_inner;
  nlohmann::ordered_json s;
  s["with_replacement"] = cfg.sampling.with_replacement;
  s["m"] = cfg.sampling.m;
  s["scheme"] = scheme_name(cfg.sampling.scheme);
  s["K"] = cfg.sampling.K;
  if (cfg.sampling.partition_seed)
    s["partition_seed"] = *cfg.sampling.partition_seed;
  else
    s["partition_seed"] = nullptr;
  j["sampling"] = std::move(s);
  return j;
}

SolverConfig solver_config_from_json(const nlohmann::ordered_json& j) {
  SolverConfig cfg;
  cfg.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  cfg.epochs = j.value("epochs", index_t{1});
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.eta = j.value("eta", 0.0);
  cfg.sigma = j.value("sigma", 0.0);
  cfg.tau = j.value("tau", 0.0);
  cfg.alpha = j.value("alpha", 0.0);
  cfg.theta = j.value("theta", -1.0);
  cfg.inner_len = j.value("inner_len", index_t{0});
  cfg.outer_loops = j.value("outer_loops", index_t{0});
  cfg.tv_inner = j.value("tv_inner", index_t{50});
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    cfg.sampling.with_replacement = s.value("with_replacement", false);
    cfg.sampling.m = s.value("m", index_t{1});
    cfg.sampling.scheme = scheme_from_name(s.value("scheme", std::string("interleaved")));
    cfg.sampling.K = s.value("K", index_t{1});
    if (s.contains("partition_seed") && !s.at("partition_seed").is_null())
      cfg.sampling.partition_seed = s.at("partition_seed").get<std::uint64_t>();
  }
  return cfg;
}

namespace {

void append_sa_row(std::ostringstream& out, const SAReport& r) {
  out << r.K << "," << r.scheme << "," << format_double17(r.L_f) << ","
      << format_double17(r.L_b) << "," << format_double17(r.upsilon) << ","
      << format_double17(r.mu_ell) << "," << format_double17(r.alpha_ell) << ","
      << format_double17(r.alpha_u) << "," << format_double17(r.alpha_s) << ","
      << format_double17(r.alpha_r_certified.value) << ","
      << format_double17(r.alpha_r_heuristic.value) << ","
      << format_double17(r.alpha_sigma.value) << "," << format_double17(r.beta) << ","
      << format_double17(r.rho) << "\n";
}

}  // namespace

std::string sa_reports_to_csv(std::span<const SAReport> reports) {
  std::ostringstream out;
  out << kSaCurveCsvSchema << "\n";
  out << "K,scheme,L_f,L_b,upsilon,mu_ell,alpha_ell,alpha_u,alpha_s,alpha_r_d15,alpha_r_d2,"
         "alpha_sigma,beta,rho\n";
  for (const SAReport& r : reports) append_sa_row(out, r);
  return out.str();
}

void write_sa_reports_csv(const std::filesystem::path& path, std::span<const SAReport> reports) {
  write_text_atomic(path, sa_reports_to_csv(reports));
}

nlohmann::ordered_json sa_report_to_json(const SAReport& r) {
  nlohmann::ordered_json j;
  j["K"] = r.K;
  j["scheme"] = r.scheme;
  j["L_f"] = r.L_f;
  j["L_b"] = r.L_b;
  j["upsilon"] = r.upsilon;
  j["mu_ell"] = r.mu_ell;
  j["alpha_ell"] = r.alpha_ell;
  j["alpha_u"] = r.alpha_u;
  j["alpha_s"] = r.alpha_s;
  const bool beta_finite = std::isfinite(r.beta);
  j["beta"] = beta_finite ? nlohmann::ordered_json(r.beta) : nlohmann::ordered_json(nullptr);
  j["beta_finite"] = beta_finite;
  auto delta_bound = [](const DeltaBound& b) {
    nlohmann::ordered_json d;
    d["delta"] = b.delta;
    d["value"] = b.value;
    d["probability"] = b.probability;
    return d;
  };
  j["alpha_r_certified"] = delta_bound(r.alpha_r_certified);
  j["alpha_r_heuristic"] = delta_bound(r.alpha_r_heuristic);
  j["alpha_sigma"] = delta_bound(r.alpha_sigma);
  j["alpha_r_valid_window"] = r.alpha_r_valid_window;
  j["rho"] = r.rho;
  return j;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

nlohmann::ordered_json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  nlohmann::ordered_json j;
  in >> j;
  return j;
}

}  // namespace stochascope
