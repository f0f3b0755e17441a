#include "stochascope/bundle.hpp"

#include <cstdio>
#include <fstream>

#include "stochascope/matrix_market.hpp"
#include "stochascope/rng.hpp"
#include "stochascope/trace_io.hpp"

namespace stochascope {

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for digesting");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return out;
}

nlohmann::ordered_json GeneratorSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["n"] = n;
  j["d"] = d;
  if (kind == "gaussian") {
    j["mean"] = mean;
    j["var"] = var;
  }
  if (kind == "blur") {
    j["d1"] = d1;
    j["d2"] = d2;
    j["r_min"] = r_min;
    j["r_max"] = r_max;
  }
  return j;
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::ordered_json& j) {
  GeneratorSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  spec.n = j.value("n", index_t{0});
  spec.d = j.value("d", index_t{0});
  spec.mean = j.value("mean", 0.0);
  spec.var = j.value("var", 1.0);
  spec.d1 = j.value("d1", index_t{0});
  spec.d2 = j.value("d2", index_t{0});
  spec.r_min = j.value("r_min", 0.0);
  spec.r_max = j.value("r_max", 0.0);
  return spec;
}

ForwardOperator build_from_generator(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.kind == "gaussian")
    return build_random_ensemble({EnsembleKind::kGaussian, spec.mean, spec.var}, spec.n, spec.d,
                                 seed);
  if (spec.kind == "uniform01")
    return build_random_ensemble({EnsembleKind::kUniform01}, spec.n, spec.d, seed);
  if (spec.kind == "wishart")
    return build_random_ensemble({EnsembleKind::kSubsampledWishart}, spec.n, spec.d, seed);
  if (spec.kind == "blur")
    return build_space_varying_blur({spec.d1, spec.d2, spec.r_min, spec.r_max});
  if (spec.kind == "identity")
    return ForwardOperator(Matrix::identity(spec.n), "identity");
  if (spec.kind == "identical_rows") {
    // n copies of one seeded gaussian row: the tight Upsilon = K fixture.
    Rng rng = Rng::stream(seed, "identical-rows");
    std::vector<double> row(static_cast<std::size_t>(spec.d));
    for (double& v : row) v = rng.normal();
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(spec.n * spec.d));
    for (index_t i = 0; i < spec.n; ++i) vals.insert(vals.end(), row.begin(), row.end());
    return ForwardOperator(Matrix::dense(spec.n, spec.d, std::move(vals)), "identical_rows");
  }
  throw std::invalid_argument("unknown generator kind '" + spec.kind + "'");
}

nlohmann::ordered_json regularizer_to_json(const RegularizerSpec& reg, bool g_is_tv) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json g;
  g["kind"] = reg.g == GKind::kL1 ? "l1" : "none";
  g["lambda"] = reg.lambda;
  g["op"] = g_is_tv ? "tv" : "identity";
  j["g"] = std::move(g);
  nlohmann::ordered_json h;
  switch (reg.h) {
    case HKind::kNone: h["kind"] = "none"; break;
    case HKind::kL1: h["kind"] = "l1"; break;
    case HKind::kNonneg: h["kind"] = "nonneg"; break;
    case HKind::kBox: h["kind"] = "box"; break;
    case HKind::kSupport: h["kind"] = "support"; break;
  }
  h["gamma"] = reg.gamma;
  if (reg.h == HKind::kBox) {
    h["lo"] = reg.box_lo;
    h["hi"] = reg.box_hi;
  }
  if (reg.h == HKind::kSupport) {
    nlohmann::ordered_json mask = nlohmann::ordered_json::array();
    for (char m : reg.support_mask) mask.push_back(m != 0);
    h["mask"] = std::move(mask);
  }
  j["h"] = std::move(h);
  return j;
}

namespace {

RegularizerSpec regularizer_from_json(const nlohmann::ordered_json& j,
                                      const ForwardOperator& op) {
  RegularizerSpec reg;
  const auto& g = j.at("g");
  const std::string gkind = g.at("kind").get<std::string>();
  if (gkind == "l1")
    reg.g = GKind::kL1;
  else if (gkind != "none")
    throw std::runtime_error("unsupported g kind '" + gkind + "'");
  reg.lambda = g.at("lambda").get<double>();
  const std::string gop = g.value("op", std::string("identity"));
  if (gop == "tv") {
    if (!op.image_shape)
      throw std::runtime_error("tv regularizer needs an operator with an image shape");
    reg.d = std::make_shared<Matrix>(
        diff_operator(op.image_shape->first, op.image_shape->second));
  } else if (gop != "identity") {
    throw std::runtime_error("unsupported g operator '" + gop + "'");
  }
  const auto& h = j.at("h");
  const std::string hkind = h.at("kind").get<std::string>();
  if (hkind == "none")
    reg.h = HKind::kNone;
  else if (hkind == "l1")
    reg.h = HKind::kL1;
  else if (hkind == "nonneg")
    reg.h = HKind::kNonneg;
  else if (hkind == "box")
    reg.h = HKind::kBox;
  else if (hkind == "support")
    reg.h = HKind::kSupport;
  else
    throw std::runtime_error("unsupported h kind '" + hkind + "'");
  reg.gamma = h.at("gamma").get<double>();
  if (reg.h == HKind::kBox) {
    reg.box_lo = h.at("lo").get<double>();
    reg.box_hi = h.at("hi").get<double>();
  }
  if (reg.h == HKind::kSupport) {
    for (const auto& m : h.at("mask")) reg.support_mask.push_back(m.get<bool>() ? 1 : 0);
  }
  return reg;
}

}  // namespace

Problem Bundle::to_problem() const {
  return make_problem(op, b, x_true, reg, noise_norm);
}

void save_bundle(const std::filesystem::path& dir, const ForwardOperator& op,
                 std::span<const double> b, const std::optional<std::vector<double>>& x_true,
                 const BundleWriteRequest& req) {
  std::filesystem::create_directories(dir);
  write_matrix_market(dir / "operator.mtx", op.matrix);
  write_vector_market(dir / "b.mtx", b);
  if (x_true) write_vector_market(dir / "x_true.mtx", *x_true);

  nlohmann::ordered_json m;
  m["schema"] = "stochascope-bundle v1";
  m["label"] = req.label.empty() ? op.label : req.label;
  m["seed"] = req.seed;
  nlohmann::ordered_json op_json;
  op_json["file"] = "operator.mtx";
  op_json["digest"] = file_digest(dir / "operator.mtx");
  op_json["n"] = op.matrix.rows();
  op_json["d"] = op.matrix.cols();
  if (op.image_shape)
    op_json["image_shape"] = {op.image_shape->first, op.image_shape->second};
  else
    op_json["image_shape"] = nullptr;
  m["operator"] = std::move(op_json);
  m["generator"] = req.generator ? req.generator->to_json() : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json b_json;
  b_json["file"] = "b.mtx";
  b_json["digest"] = file_digest(dir / "b.mtx");
  m["b"] = std::move(b_json);
  if (x_true) {
    nlohmann::ordered_json x_json;
    x_json["file"] = "x_true.mtx";
    x_json["digest"] = file_digest(dir / "x_true.mtx");
    m["x_true"] = std::move(x_json);
  } else {
    m["x_true"] = nullptr;
  }
  m["est_error_available"] = x_true.has_value();
  m["regularizer"] = req.regularizer;
  m["snr_requested"] =
      req.snr_requested ? nlohmann::ordered_json(*req.snr_requested) : nlohmann::ordered_json(nullptr);
  m["snr_achieved"] =
      req.snr_achieved ? nlohmann::ordered_json(*req.snr_achieved) : nlohmann::ordered_json(nullptr);
  m["noise_norm"] =
      req.noise_norm ? nlohmann::ordered_json(*req.noise_norm) : nlohmann::ordered_json(nullptr);
  write_json_atomic(dir / "manifest.json", m);
}

Bundle load_bundle(const std::filesystem::path& dir) {
  const nlohmann::ordered_json m = read_json(dir / "manifest.json");
  if (m.value("schema", std::string()) != "stochascope-bundle v1")
    throw std::runtime_error("unknown bundle schema in '" + dir.string() + "'");

  auto verify = [&](const nlohmann::ordered_json& ref) -> std::filesystem::path {
    const std::filesystem::path path = dir / ref.at("file").get<std::string>();
    const std::string expected = ref.at("digest").get<std::string>();
    const std::string actual = file_digest(path);
    if (actual != expected)
      throw std::runtime_error("digest mismatch for '" + path.string() + "': manifest " +
                               expected + ", file " + actual);
    return path;
  };

  Matrix a = read_matrix_market(verify(m.at("operator")));
  const auto& op_json = m.at("operator");
  if (a.rows() != op_json.at("n").get<index_t>() || a.cols() != op_json.at("d").get<index_t>())
    throw std::runtime_error("operator dimensions disagree with the manifest");
  std::optional<std::pair<index_t, index_t>> shape;
  if (!op_json.at("image_shape").is_null()) {
    const auto arr = op_json.at("image_shape");
    shape = std::make_pair(arr.at(0).get<index_t>(), arr.at(1).get<index_t>());
  }
  ForwardOperator op(std::move(a), m.value("label", std::string("bundle")), shape);

  std::vector<double> b = read_vector_market(verify(m.at("b")));
  if (static_cast<index_t>(b.size()) != op.matrix.rows())
    throw std::runtime_error("b length disagrees with the operator");

  std::optional<std::vector<double>> x_true;
  if (!m.at("x_true").is_null()) {
    x_true = read_vector_market(verify(m.at("x_true")));
    if (static_cast<index_t>(x_true->size()) != op.matrix.cols())
      throw std::runtime_error("x_true length disagrees with the operator");
  }

  RegularizerSpec reg = regularizer_from_json(m.at("regularizer"), op);
  std::optional<double> noise_norm;
  if (!m.at("noise_norm").is_null()) noise_norm = m.at("noise_norm").get<double>();

  return Bundle{dir, m, std::move(op), std::move(b), std::move(x_true), std::move(reg),
                noise_norm};
}

}  // namespace stochascope
