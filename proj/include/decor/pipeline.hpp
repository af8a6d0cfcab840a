#pragma once

#include <cstdint>

#include "decor/enhance.hpp"
#include "decor/lock.hpp"

namespace decor {

/// Everything needed to lock one circuit with one scheme.
struct SchemeSpec {
  Scheme scheme = Scheme::Xbi;
  std::size_t key_size = 32;
  /// N for the enhanced schemes.
  std::size_t max_keys = 8;
  /// Rewrite sweeps on the final netlist, for every scheme alike.
  std::size_t synth_passes = 2;
  bool allow_duplicate_inputs = false;
  bool normalize = false;
  OracleConfig oracle = {};
};

/// Locks `c`, enhances when the scheme asks for it, rewrites, and verifies
/// every listed key. Deterministic in (c, spec, seed).
LockedCircuit lock_with_scheme(const Circuit& c, const SchemeSpec& spec, std::uint64_t seed);

}  // namespace decor
