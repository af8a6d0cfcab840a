#include "decor/enhance.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "decor/error.hpp"
#include "decor/random.hpp"
#include "decor/rewrite.hpp"

namespace decor {

namespace {

void check_range(std::size_t kappa, std::size_t max_keys) {
  if (kappa == 0) throw InvalidArgument("key size must be at least 1");
  if (max_keys < 2) throw InvalidArgument("maximum number of correct keys must be at least 2");
  if (kappa < 63 && max_keys > (std::size_t{1} << kappa))
    throw InvalidArgument("maximum number of correct keys " + std::to_string(max_keys) + " exceeds 2^" +
                          std::to_string(kappa));
}

}  // namespace

std::vector<std::vector<std::uint8_t>> sample_key_bits(std::size_t kappa, std::size_t max_keys,
                                                       const std::vector<std::uint8_t>& k_star, Rng& rng) {
  check_range(kappa, max_keys);
  if (k_star.size() != kappa) throw InvalidArgument("reported key width does not match key size");
  const std::size_t n = rng.between(2, max_keys);
  std::vector<std::vector<std::uint8_t>> keys{k_star};
  std::set<std::vector<std::uint8_t>> seen{k_star};
  const std::size_t budget = 10 * max_keys;
  std::size_t draws = 0;
  while (keys.size() < n) {
    if (draws++ == budget)
      throw LockError("could not draw " + std::to_string(n) + " distinct keys in " + std::to_string(budget) +
                      " attempts");
    std::vector<std::uint8_t> k(kappa);
    for (auto& b : k) b = rng.coin() ? 1 : 0;
    if (seen.insert(k).second) keys.push_back(std::move(k));
  }
  return keys;
}

std::vector<Key> sample_correct_key_set(std::size_t kappa, const DecorConfig& cfg, const Key& k_star, Rng& rng) {
  std::vector<Key> out;
  for (auto& bits : sample_key_bits(kappa, cfg.max_correct_keys, k_star.bits, rng))
    out.push_back(Key{k_star.port_names, std::move(bits)});
  return out;
}

DecorResult decor_enhance(const LockedCircuit& lc, const Key& k_star, const DecorConfig& cfg, Rng& rng) {
  if (!lc.lists(k_star)) throw LockError("reported key is not a verified key of the locked circuit");
  check_range(lc.key_size(), cfg.max_correct_keys);
  Rng keys_rng = rng.fork("decor-keys");
  auto keys = sample_correct_key_set(lc.key_size(), cfg, k_star, keys_rng);
  return decor_enhance_with_keys(lc, keys, cfg, rng);
}

DecorResult decor_enhance_with_keys(const LockedCircuit& lc, const std::vector<Key>& keys, const DecorConfig& cfg,
                                    Rng& rng) {
  if (is_decor(lc.scheme())) throw LockError("circuit is already enhanced");
  if (keys.size() < 2) throw InvalidArgument("enhancement needs at least two correct keys");
  const Key& k_star = keys.front();
  if (!lc.lists(k_star)) throw LockError("reported key is not a verified key of the locked circuit");
  const std::size_t kappa = lc.key_size();
  for (const auto& k : keys)
    if (k.width() != kappa) throw InvalidArgument("key width does not match the key ports");

  const Circuit reference = apply_key(lc, k_star);
  Circuit c = lc.circuit();
  NameAllocator names(c, "dc");
  const auto& ports = c.key_inputs;

  // The locked logic reads r_i instead of the key port.
  std::vector<std::string> remapped;
  std::unordered_map<std::string, std::string> port_to_r;
  for (const auto& p : ports) {
    remapped.push_back(names.fresh());
    port_to_r.emplace(p, remapped.back());
  }
  for (auto& g : c.gates)
    for (auto& f : g.fanin)
      if (auto it = port_to_r.find(f); it != port_to_r.end()) f = it->second;

  // eq_j = (k == keys[j]) for every extra key. Ones meet in an AND tree and
  // zeros in an OR tree with an inverted root, so every key port enters its
  // comparator through a 2-input gate.
  std::vector<std::string> eq;
  for (std::size_t j = 1; j < keys.size(); ++j) {
    std::vector<std::string> ones, zeros;
    for (std::size_t i = 0; i < kappa; ++i) (keys[j].bits[i] ? ones : zeros).push_back(ports[i]);
    std::string e;
    if (zeros.empty()) {
      e = append_tree(c, names, GateKind::And, GateKind::And, ones);
    } else if (ones.empty()) {
      e = append_tree(c, names, GateKind::Or, GateKind::Nor, zeros);
    } else if (zeros.size() == 1 && ones.size() >= 2) {
      std::string nand = append_tree(c, names, GateKind::And, GateKind::Nand, ones);
      e = names.fresh();
      c.gates.push_back({e, GateKind::Nor, {zeros[0], nand}});
    } else {
      std::string all_ones = append_tree(c, names, GateKind::And, GateKind::And, ones);
      std::string no_zero = append_tree(c, names, GateKind::Or, GateKind::Nor, zeros);
      e = names.fresh();
      c.gates.push_back({e, GateKind::And, {all_ones, no_zero}});
    }
    eq.push_back(std::move(e));
  }

  // flip_i = (k matches an extra key that differs from k_star at bit i).
  for (std::size_t i = 0; i < kappa; ++i) {
    std::vector<std::string> differing;
    for (std::size_t j = 1; j < keys.size(); ++j)
      if (keys[j].bits[i] != k_star.bits[i]) differing.push_back(eq[j - 1]);
    std::string flip;
    if (!differing.empty()) {
      flip = append_tree(c, names, GateKind::Or, GateKind::Or, differing);
    } else {
      // Constant zero shaped like a comparator term, built away from the key
      // ports: two listed keys cannot both match, and the comparator root
      // cannot be true while one of its children disagrees.
      flip = names.fresh();
      if (eq.size() >= 2) {
        c.gates.push_back({flip, GateKind::And, {eq[0], eq[1]}});
      } else {
        auto root = std::find_if(c.gates.begin(), c.gates.end(), [&](const Gate& g) { return g.output == eq[0]; });
        if (root == c.gates.end() || root->fanin.size() < 2) throw LockError("comparator has no internal node");
        const GateKind kind = root->kind;
        std::string child = root->fanin[0];
        for (const auto& f : root->fanin)
          if (std::find(ports.begin(), ports.end(), f) == ports.end()) {
            child = f;
            break;
          }
        if (kind == GateKind::And) {
          std::string inv = names.fresh();
          c.gates.push_back({inv, GateKind::Not, {child}});
          child = inv;
        }
        c.gates.push_back({flip, GateKind::And, {eq[0], child}});
      }
    }
    // r_i = flip ? NOT k_i : k_i, as an AND/OR select so it cannot merge with
    // an XOR key gate downstream.
    const std::string keep = names.fresh(), not_flip = names.fresh(), swap = names.fresh(), not_key = names.fresh();
    c.gates.push_back({not_flip, GateKind::Not, {flip}});
    c.gates.push_back({keep, GateKind::And, {ports[i], not_flip}});
    c.gates.push_back({not_key, GateKind::Not, {ports[i]}});
    c.gates.push_back({swap, GateKind::And, {not_key, flip}});
    c.gates.push_back({remapped[i], GateKind::Or, {keep, swap}});
  }

  c = remove_dead_gates(topologically_sorted(c));
  Rng synth = rng.fork("decor-rewrite");
  c = synthesize(c, synth, std::max<std::size_t>(2, cfg.rewrite_passes));

  const Scheme scheme = lc.scheme() == Scheme::Xbi ? Scheme::DecorXbi : Scheme::DecorSarlock;
  auto locked = LockedCircuit::verified(std::move(c), scheme, keys, reference, cfg.oracle);
  return {std::move(locked), k_star, keys};
}

}  // namespace decor
