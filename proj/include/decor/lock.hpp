#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decor/netlist.hpp"
#include "decor/simulate.hpp"

namespace decor {

class Rng;

/// Key bits in key-port order.
struct Key {
  std::vector<std::string> port_names;
  std::vector<std::uint8_t> bits;

  std::size_t width() const { return bits.size(); }
  /// Bits as a '0'/'1' string, port 0 first.
  std::string str() const;

  friend bool operator==(const Key& a, const Key& b) { return a.bits == b.bits && a.port_names == b.port_names; }
};

Key make_key(const std::vector<std::string>& ports, std::vector<std::uint8_t> bits);
Key random_key(const std::vector<std::string>& ports, Rng& rng);
Key complement(const Key& k);
std::size_t hamming_distance(const Key& a, const Key& b);

/// `portname=bit` per line; `#` starts a comment.
std::string write_key_file(const Key& k);
Key parse_key_file(std::string_view text);
/// Several keys separated by blank lines, each preceded by `# key <i>`.
std::string write_key_list(const std::vector<Key>& keys);
std::vector<Key> parse_key_list(std::string_view text);

enum class Scheme { Xbi, Sarlock, DecorXbi, DecorSarlock };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view text);
bool is_decor(Scheme s);
Scheme base_scheme(Scheme s);

/// Locked netlist with its known correct keys (first entry is the reported key).
class LockedCircuit {
 public:
  /// Checks every key against `original` and rejects refuted or duplicate
  /// keys. Sampled (inconclusive) verdicts are accepted.
  static LockedCircuit verified(Circuit circuit, Scheme scheme, std::vector<Key> correct_keys, const Circuit& original,
                                const OracleConfig& oracle = {});
  /// No functional check; structural consistency only.
  static LockedCircuit unchecked(Circuit circuit, Scheme scheme, std::vector<Key> correct_keys);

  const Circuit& circuit() const { return circuit_; }
  Scheme scheme() const { return scheme_; }
  const std::vector<std::string>& key_ports() const { return circuit_.key_inputs; }
  std::size_t key_size() const { return circuit_.key_inputs.size(); }
  const std::vector<Key>& correct_keys() const { return correct_keys_; }
  const Key& reported_key() const { return correct_keys_.front(); }
  bool lists(const Key& k) const;

 private:
  LockedCircuit(Circuit c, Scheme s, std::vector<Key> keys);

  Circuit circuit_;
  Scheme scheme_;
  std::vector<Key> correct_keys_;
};

struct SchemeParams {
  std::size_t key_size = 0;
  std::uint64_t seed = 0;
  /// SARLock comparator inputs; drawn at random when absent.
  std::optional<std::vector<std::string>> sarlock_input_subset;
  /// SARLock with more key bits than inputs: reuse inputs round-robin.
  bool allow_duplicate_inputs = false;
  /// Decompose wide gates to 2-input trees before locking.
  bool normalize = false;
  OracleConfig oracle = {};
};

struct LockResult {
  LockedCircuit locked;
  Key key;
};

/// XOR/XNOR insertion on `key_size` distinct observable wires. The gate is
/// XOR when the correct bit is 0 and XNOR when it is 1.
LockResult lock_xbi(const Circuit& c, const SchemeParams& p, Rng& rng);

/// Point-function flip: F = (x_S == k) AND NOT (x_S == k*), XORed into the
/// output with the largest fan-in cone.
LockResult lock_sarlock(const Circuit& c, const SchemeParams& p, Rng& rng);

/// Binds the key ports to `k`, propagates constants and drops dead logic.
Circuit apply_key(const Circuit& locked, const Key& k);
Circuit apply_key(const LockedCircuit& lc, const Key& k);

Verdict is_correct_key(const LockedCircuit& lc, const Circuit& original, const Key& k, const OracleConfig& oracle = {});

/// Number of nodes in each output's transitive fan-in cone, sources included.
std::vector<std::size_t> fanin_cone_sizes(const Circuit& c);

}  // namespace decor
