#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tnd/spanning_tree.hpp"

namespace tnd {

/// All randomness in the library flows through a seeded std::mt19937_64.
/// Bounded draws and unit doubles are derived by hand so streams reproduce
/// across standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) via rejection sampling; bound >= 1.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on uniform_unit draws.
inline double standard_normal(Rng& rng) {
  double u = uniform_unit(rng);
  while (u == 0.0) u = uniform_unit(rng);
  const double v = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

/// k distinct indices sampled from [0, pool) without replacement, ascending.
inline std::vector<int> sample_indices(Rng& rng, int pool, int k) {
  std::vector<int> idx(pool);
  for (int i = 0; i < pool; ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(uniform_below(rng, pool - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Uniform labeled tree drawn through a random Prufer sequence.
inline SpanningTree random_tree(Rng& rng, int node_count) {
  std::vector<int> seq(node_count >= 2 ? node_count - 2 : 0);
  for (auto& s : seq) s = static_cast<int>(uniform_below(rng, node_count));
  return prufer_decode(seq);
}

}  // namespace tnd
