#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stochascope/operators.hpp"

namespace stochascope {

enum class PartitionScheme { kInterleaved, kRandom, kConsecutive, kCustom };

std::string scheme_name(PartitionScheme s);
PartitionScheme scheme_from_name(const std::string& name);

// Disjoint index blocks S_1..S_K covering [0, n). When n mod K != 0 the
// first n mod K blocks carry one extra row.
struct Partition {
  std::vector<std::vector<index_t>> blocks;
  PartitionScheme scheme = PartitionScheme::kCustom;
  index_t n = 0;
  std::optional<std::uint64_t> seed;  // random scheme only

  index_t num_blocks() const { return static_cast<index_t>(blocks.size()); }
  void validate() const;  // disjoint, covering, nonempty blocks

  nlohmann::ordered_json to_json() const;
  static Partition from_json(const nlohmann::ordered_json& j);
};

// interleaved: block k = {k, k+K, k+2K, ...}
// consecutive: contiguous chunks
// random: seeded shuffle of [0, n) then consecutive chunking
Partition make_partition(PartitionScheme scheme, index_t n, index_t k,
                         std::optional<std::uint64_t> seed = std::nullopt);

Partition custom_partition(std::vector<std::vector<index_t>> blocks, index_t n);

// mu_ell: max over blocks q and rows j in S_q of sum_{k in S_q} |<a_j, a_k>|,
// diagonal term included. Exact; parallel over blocks.
double local_accumulated_coherence(const ForwardOperator& a, const Partition& p);

// S^k A as an m x d matrix.
Matrix subset_operator(const ForwardOperator& a, std::span<const index_t> block);

}  // namespace stochascope
