#include "stochascope/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stochascope/rng.hpp"
#include "stochascope/threads.hpp"

namespace stochascope {

std::string scheme_name(PartitionScheme s) {
  switch (s) {
    case PartitionScheme::kInterleaved: return "interleaved";
    case PartitionScheme::kRandom: return "random";
    case PartitionScheme::kConsecutive: return "consecutive";
    case PartitionScheme::kCustom: return "custom";
  }
  return "custom";
}

PartitionScheme scheme_from_name(const std::string& name) {
  if (name == "interleaved") return PartitionScheme::kInterleaved;
  if (name == "random") return PartitionScheme::kRandom;
  if (name == "consecutive") return PartitionScheme::kConsecutive;
  if (name == "custom") return PartitionScheme::kCustom;
  throw std::invalid_argument("unknown partition scheme '" + name + "'");
}

void Partition::validate() const {
  if (n < 1) throw std::invalid_argument("partition over empty index set");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  index_t total = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("empty partition block");
    for (index_t i : block) {
      if (i < 0 || i >= n) throw std::invalid_argument("partition index out of range");
      if (seen[static_cast<std::size_t>(i)]) throw std::invalid_argument("partition blocks overlap");
      seen[static_cast<std::size_t>(i)] = 1;
      ++total;
    }
  }
  if (total != n) throw std::invalid_argument("partition blocks do not cover [n]");
}

namespace {

// Chunk a row order into K consecutive blocks; the first n mod K blocks get
// one extra row.
std::vector<std::vector<index_t>> chunk(const std::vector<index_t>& order, index_t k) {
  const index_t n = static_cast<index_t>(order.size());
  const index_t base = n / k, extra = n % k;
  std::vector<std::vector<index_t>> blocks(static_cast<std::size_t>(k));
  index_t pos = 0;
  for (index_t b = 0; b < k; ++b) {
    const index_t len = base + (b < extra ? 1 : 0);
    blocks[static_cast<std::size_t>(b)].assign(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  return blocks;
}

}  // namespace

Partition make_partition(PartitionScheme scheme, index_t n, index_t k,
                         std::optional<std::uint64_t> seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= K <= n");
  Partition p;
  p.scheme = scheme;
  p.n = n;
  switch (scheme) {
    case PartitionScheme::kInterleaved: {
      p.blocks.resize(static_cast<std::size_t>(k));
      for (index_t b = 0; b < k; ++b)
        for (index_t i = b; i < n; i += k) p.blocks[static_cast<std::size_t>(b)].push_back(i);
      break;
    }
    case PartitionScheme::kConsecutive: {
      std::vector<index_t> order(static_cast<std::size_t>(n));
      for (index_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      p.blocks = chunk(order, k);
      break;
    }
    case PartitionScheme::kRandom: {
      if (!seed) throw std::invalid_argument("random partition needs a seed");
      std::vector<index_t> order(static_cast<std::size_t>(n));
      for (index_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      Rng rng = Rng::stream(*seed, "partition");
      rng.shuffle(order);
      p.blocks = chunk(order, k);
      p.seed = seed;
      break;
    }
    case PartitionScheme::kCustom:
      throw std::invalid_argument("use custom_partition for explicit blocks");
  }
  p.validate();
  return p;
}

Partition custom_partition(std::vector<std::vector<index_t>> blocks, index_t n) {
  Partition p;
  p.scheme = PartitionScheme::kCustom;
  p.n = n;
  p.blocks = std::move(blocks);
  p.validate();
  return p;
}

nlohmann::ordered_json Partition::to_json() const {
  nlohmann::ordered_json j;
  j["scheme"] = scheme_name(scheme);
  j["n"] = n;
  j["K"] = num_blocks();
  if (seed)
    j["seed"] = *seed;
  else
    j["seed"] = nullptr;
  if (scheme == PartitionScheme::kCustom) j["blocks"] = blocks;
  return j;
}

Partition Partition::from_json(const nlohmann::ordered_json& j) {
  const PartitionScheme scheme = scheme_from_name(j.at("scheme").get<std::string>());
  const index_t n = j.at("n").get<index_t>();
  const index_t k = j.at("K").get<index_t>();
  if (scheme == PartitionScheme::kCustom)
    return custom_partition(j.at("blocks").get<std::vector<std::vector<index_t>>>(), n);
  std::optional<std::uint64_t> seed;
  if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();
  return make_partition(scheme, n, k, seed);
}

double local_accumulated_coherence(const ForwardOperator& a, const Partition& p) {
  if (p.n != a.matrix.rows()) throw std::invalid_argument("partition does not match operator rows");
  const Matrix& m = a.matrix;
  const index_t nb = p.num_blocks();
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst) \
    num_threads(effective_threads())
  for (index_t q = 0; q < nb; ++q) {
    const auto& block = p.blocks[static_cast<std::size_t>(q)];
    double block_max = 0.0;
    for (index_t j : block) {
      double acc = 0.0;
      for (index_t k : block) acc += std::abs(m.row_dot(j, k));
      block_max = std::max(block_max, acc);
    }
    worst = std::max(worst, block_max);
  }
  return worst;
}

Matrix subset_operator(const ForwardOperator& a, std::span<const index_t> block) {
  return a.matrix.subset_rows(block);
}

}  // namespace stochascope
