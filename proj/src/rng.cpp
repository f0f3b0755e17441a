#include "stochascope/rng.hpp"

#include <algorithm>

namespace stochascope {

Rng Rng::stream(std::uint64_t root_seed, std::string_view tag) {
  // FNV-1a over the tag, folded into the root seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  Rng mix(root_seed ^ h);
  mix.next_u64();  // decorrelate nearby seeds
  return Rng(mix.next_u64());
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t m) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  // Partial Fisher-Yates: first m entries are the sample.
  for (std::size_t i = 0; i < m && i + 1 < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(uniform_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace stochascope
