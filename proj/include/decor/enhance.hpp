#pragma once

#include <cstdint>
#include <vector>

#include "decor/lock.hpp"

namespace decor {

class Rng;

struct DecorConfig {
  /// Upper bound N on the number of correct keys; 2 <= N <= 2^kappa.
  std::size_t max_correct_keys = 8;
  std::uint64_t seed = 0;
  /// Rewrite sweeps applied to the enhanced netlist (at least 2 are run).
  std::size_t rewrite_passes = 2;
  OracleConfig oracle = {};
};

struct DecorResult {
  LockedCircuit locked;
  /// Equals correct_key_list.front().
  Key reported_key;
  std::vector<Key> correct_key_list;
};

/// Key bit vectors only: the first entry is `k_star`, followed by n - 1
/// distinct extra keys, n uniform on {2, ..., N}. Duplicates are redrawn;
/// more than 10 N draws is an error.
std::vector<std::vector<std::uint8_t>> sample_key_bits(std::size_t kappa, std::size_t max_keys,
                                                       const std::vector<std::uint8_t>& k_star, Rng& rng);

std::vector<Key> sample_correct_key_set(std::size_t kappa, const DecorConfig& cfg, const Key& k_star, Rng& rng);

/// Remaps the key bus so every listed key behaves like k_star while any other
/// key keeps its original behaviour, then rewrites the result.
DecorResult decor_enhance(const LockedCircuit& lc, const Key& k_star, const DecorConfig& cfg, Rng& rng);

/// Same, with an explicit key list (front must be k_star).
DecorResult decor_enhance_with_keys(const LockedCircuit& lc, const std::vector<Key>& keys, const DecorConfig& cfg,
                                    Rng& rng);

}  // namespace decor
