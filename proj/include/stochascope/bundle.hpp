#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "stochascope/solvers.hpp"

namespace stochascope {

// FNV-1a 64 over file bytes, formatted "fnv1a64:<16 hex digits>".
std::string file_digest(const std::filesystem::path& path);

// How a problem was synthesized; recorded in the manifest so that reloading
// plus re-synthesizing with the same seed reproduces the data bit-exactly.
struct GeneratorSpec {
  std::string kind;  // gaussian | uniform01 | wishart | blur | identity | identical_rows
  index_t n = 0;
  index_t d = 0;
  double mean = 0.0;
  double var = 1.0;
  index_t d1 = 0;
  index_t d2 = 0;
  double r_min = 0.0;
  double r_max = 0.0;

  nlohmann::ordered_json to_json() const;
  static GeneratorSpec from_json(const nlohmann::ordered_json& j);
};

ForwardOperator build_from_generator(const GeneratorSpec& spec, std::uint64_t seed);

nlohmann::ordered_json regularizer_to_json(const RegularizerSpec& reg, bool g_is_tv);

// A problem bundle on disk: operator.mtx, b.mtx, optional x_true.mtx and a
// manifest holding digests, the generator spec, the regularizer and the
// noise record. Digests are verified at load; a mismatch is an error.
struct Bundle {
  std::filesystem::path dir;
  nlohmann::ordered_json manifest;
  ForwardOperator op;
  std::vector<double> b;
  std::optional<std::vector<double>> x_true;
  RegularizerSpec reg;
  std::optional<double> noise_norm;

  Problem to_problem() const;
};

struct BundleWriteRequest {
  std::string label;
  std::uint64_t seed = 0;
  std::optional<GeneratorSpec> generator;
  nlohmann::ordered_json regularizer;  // from regularizer_to_json
  std::optional<double> snr_requested;
  std::optional<double> snr_achieved;
  std::optional<double> noise_norm;
};

void save_bundle(const std::filesystem::path& dir, const ForwardOperator& op,
                 std::span<const double> b, const std::optional<std::vector<double>>& x_true,
                 const BundleWriteRequest& req);

Bundle load_bundle(const std::filesystem::path& dir);

}  // namespace stochascope
