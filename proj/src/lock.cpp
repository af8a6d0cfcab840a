#include "decor/lock.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "decor/error.hpp"
#include "decor/random.hpp"
#include "decor/rewrite.hpp"

namespace decor {

std::string Key::str() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Key make_key(const std::vector<std::string>& ports, std::vector<std::uint8_t> bits) {
  if (ports.size() != bits.size())
    throw InvalidArgument("key has " + std::to_string(bits.size()) + " bits for " + std::to_string(ports.size()) +
                          " ports");
  for (auto& b : bits) b = b ? 1 : 0;
  return Key{ports, std::move(bits)};
}

Key random_key(const std::vector<std::string>& ports, Rng& rng) {
  std::vector<std::uint8_t> bits(ports.size());
  for (auto& b : bits) b = rng.coin() ? 1 : 0;
  return Key{ports, std::move(bits)};
}

Key complement(const Key& k) {
  Key out = k;
  for (auto& b : out.bits) b ^= 1;
  return out;
}

std::size_t hamming_distance(const Key& a, const Key& b) {
  if (a.width() != b.width()) throw InvalidArgument("key widths differ");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.width(); ++i) d += a.bits[i] != b.bits[i];
  return d;
}

std::string write_key_file(const Key& k) {
  std::string out;
  for (std::size_t i = 0; i < k.width(); ++i) out += k.port_names[i] + "=" + (k.bits[i] ? "1" : "0") + "\n";
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view l = text.substr(0, nl);
    f(++line, l);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

Key parse_key_file(std::string_view text) {
  Key k;
  for_each_line(text, [&](std::size_t line, std::string_view l) {
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) return;
    std::size_t eq = l.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected portname=bit", line, 1);
    std::string_view name = trim(l.substr(0, eq));
    std::string_view bit = trim(l.substr(eq + 1));
    if (name.empty()) throw ParseError("missing port name", line, 1);
    if (bit != "0" && bit != "1") throw ParseError("key bit must be 0 or 1", line, eq + 2);
    k.port_names.emplace_back(name);
    k.bits.push_back(bit == "1");
  });
  if (k.bits.empty()) throw ParseError("key file holds no bits", 0, 0);
  return k;
}

std::string write_key_list(const std::vector<Key>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += "\n";
    out += "# key " + std::to_string(i) + "\n" + write_key_file(keys[i]);
  }
  return out;
}

std::vector<Key> parse_key_list(std::string_view text) {
  std::vector<Key> keys;
  std::string block;
  auto flush = [&] {
    if (trim(block).empty()) return;
    std::string_view body = block;
    bool any = false;
    for_each_line(body, [&](std::size_t, std::string_view l) {
      if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
      any = any || !trim(l).empty();
    });
    if (any) keys.push_back(parse_key_file(block));
    block.clear();
  };
  for_each_line(text, [&](std::size_t, std::string_view l) {
    if (trim(l).empty()) {
      flush();
    } else {
      block.append(l);
      block.push_back('\n');
    }
  });
  flush();
  return keys;
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::Xbi: return "xbi";
    case Scheme::Sarlock: return "sarlock";
    case Scheme::DecorXbi: return "decor-xbi";
    case Scheme::DecorSarlock: return "decor-sarlock";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return c == '_' ? '-' : std::tolower(c); });
  for (Scheme s : {Scheme::Xbi, Scheme::Sarlock, Scheme::DecorXbi, Scheme::DecorSarlock})
    if (t == to_string(s)) return s;
  return std::nullopt;
}

bool is_decor(Scheme s) { return s == Scheme::DecorXbi || s == Scheme::DecorSarlock; }

Scheme base_scheme(Scheme s) {
  if (s == Scheme::DecorXbi) return Scheme::Xbi;
  if (s == Scheme::DecorSarlock) return Scheme::Sarlock;
  return s;
}

LockedCircuit::LockedCircuit(Circuit c, Scheme s, std::vector<Key> keys)
    : circuit_(std::move(c)), scheme_(s), correct_keys_(std::move(keys)) {
  if (correct_keys_.empty()) throw LockError("locked circuit needs at least one correct key");
  if (circuit_.key_inputs.empty()) throw LockError("locked circuit has no key ports");
  std::set<std::vector<std::uint8_t>> seen;
  for (const auto& k : correct_keys_) {
    if (k.port_names != circuit_.key_inputs) throw LockError("key ports do not match the locked circuit");
    if (!seen.insert(k.bits).second) throw LockError("duplicate correct key " + k.str());
  }
  std::unordered_set<std::string> inputs(circuit_.inputs.begin(), circuit_.inputs.end());
  for (const auto& k : circuit_.key_inputs)
    if (inputs.contains(k)) throw LockError("key port " + k + " is also a primary input");
}

LockedCircuit LockedCircuit::unchecked(Circuit circuit, Scheme scheme, std::vector<Key> correct_keys) {
  return LockedCircuit(std::move(circuit), scheme, std::move(correct_keys));
}

LockedCircuit LockedCircuit::verified(Circuit circuit, Scheme scheme, std::vector<Key> correct_keys,
                                      const Circuit& original, const OracleConfig& oracle) {
  LockedCircuit lc(std::move(circuit), scheme, std::move(correct_keys));
  EquivalenceChecker checker(original, lc.circuit_);
  for (const auto& k : lc.correct_keys_) {
    Verdict v = checker.check({}, k.bits, oracle);
    if (v.inequivalent()) throw LockError("key " + k.str() + " does not unlock the original circuit");
  }
  return lc;
}

bool LockedCircuit::lists(const Key& k) const {
  return std::any_of(correct_keys_.begin(), correct_keys_.end(), [&](const Key& c) { return c.bits == k.bits; });
}

std::vector<std::size_t> fanin_cone_sizes(const Circuit& c) {
  CircuitGraph g(c);
  std::vector<std::size_t> out;
  std::vector<std::uint32_t> mark(g.node_count(), 0);
  std::vector<std::size_t> stack;
  std::uint32_t stamp = 0;
  for (const auto& o : c.outputs) {
    ++stamp;
    std::size_t count = 0;
    stack.assign(1, g.at(o));
    mark[stack[0]] = stamp;
    while (!stack.empty()) {
      std::size_t n = stack.back();
      stack.pop_back();
      ++count;
      for (std::size_t f : g.fanin(n))
        if (mark[f] != stamp) {
          mark[f] = stamp;
          stack.push_back(f);
        }
    }
    out.push_back(count);
  }
  return out;
}

namespace {

void require_unlocked(const Circuit& c, std::size_t key_size) {
  if (key_size == 0) throw InvalidArgument("key size must be at least 1");
  if (!c.key_inputs.empty()) throw LockError("circuit already has key ports");
}

std::vector<std::string> key_ports(std::size_t n) {
  std::vector<std::string> ports;
  for (std::size_t i = 0; i < n; ++i) ports.push_back(key_port_name(i));
  return ports;
}

}  // namespace

LockResult lock_xbi(const Circuit& original, const SchemeParams& p, Rng& rng) {
  require_unlocked(original, p.key_size);
  require_well_formed(original);
  const Circuit c = p.normalize ? normalize_two_input(original) : original;
  CircuitGraph graph(c);

  std::unordered_set<std::string> po(c.outputs.begin(), c.outputs.end());
  std::vector<std::size_t> candidates;
  for (std::size_t n = 0; n < graph.node_count(); ++n) {
    if (graph.type(n) == CircuitGraph::NodeType::Input) {
      if (graph.sinks(n).empty() || po.contains(graph.name(n))) continue;
    } else if (graph.type(n) == CircuitGraph::NodeType::Gate) {
      if (is_constant(graph.kind(n))) continue;
    } else {
      continue;
    }
    candidates.push_back(n);
  }
  if (candidates.size() < p.key_size)
    throw LockError("circuit has " + std::to_string(candidates.size()) + " candidate wires, key size is " +
                    std::to_string(p.key_size));

  Simulator sim(c);
  PatternBlock patterns;
  if (c.inputs.size() <= 10) {
    patterns = exhaustive_patterns(c.inputs.size());
  } else {
    Rng prng = rng.fork("xbi-observability");
    patterns = random_patterns(c.inputs.size(), 1024, prng);
  }
  const auto good = sim.run(patterns);

  // Partial Fisher-Yates over the candidate list; each draw is a fresh wire.
  std::vector<std::size_t> chosen;
  const std::size_t budget = 10 * p.key_size;
  std::size_t draws = 0;
  std::size_t remaining = candidates.size();
  while (chosen.size() < p.key_size) {
    if (draws == budget || remaining == 0)
      throw LockError("observability filter exhausted candidates after " + std::to_string(draws) + " draws");
    ++draws;
    std::size_t pick = rng.below(remaining);
    std::swap(candidates[pick], candidates[remaining - 1]);
    const std::size_t node = candidates[--remaining];
    const auto bad = sim.run(patterns, node);
    if (kernels::first_difference(good.data(), bad.data(), good.size()) != good.size()) chosen.push_back(node);
  }

  const auto ports = key_ports(p.key_size);
  Key key = random_key(ports, rng);
  Circuit locked = c;
  locked.key_inputs = ports;
  NameAllocator names(c, "lk");
  std::unordered_map<std::string, std::size_t> gate_of;
  for (std::size_t g = 0; g < locked.gates.size(); ++g) gate_of.emplace(locked.gates[g].output, g);

  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const std::size_t node = chosen[i];
    const std::string wire = graph.name(node);
    const GateKind kind = key.bits[i] ? GateKind::Xnor : GateKind::Xor;
    if (graph.is_gate(node)) {
      // The driver moves to a fresh net; the key gate takes over the wire name.
      std::string moved = names.fresh();
      locked.gates[gate_of.at(wire)].output = moved;
      locked.gates.push_back({wire, kind, {moved, ports[i]}});
    } else {
      std::string stem = names.fresh();
      for (std::size_t s : graph.sinks(node))
        for (auto& f : locked.gates[graph.gate_index(s)].fanin)
          if (f == wire) f = stem;
      locked.gates.push_back({stem, kind, {wire, ports[i]}});
    }
  }
  locked = topologically_sorted(locked);
  auto lc = LockedCircuit::verified(std::move(locked), Scheme::Xbi, {key}, original, p.oracle);
  return {std::move(lc), key};
}

LockResult lock_sarlock(const Circuit& original, const SchemeParams& p, Rng& rng) {
  require_unlocked(original, p.key_size);
  require_well_formed(original);
  const Circuit c = p.normalize ? normalize_two_input(original) : original;
  const std::size_t kappa = p.key_size;

  std::vector<std::string> subset;
  if (p.sarlock_input_subset) {
    subset = *p.sarlock_input_subset;
    if (subset.size() != kappa)
      throw InvalidArgument("input subset has " + std::to_string(subset.size()) + " names, key size is " +
                            std::to_string(kappa));
    std::unordered_set<std::string> inputs(c.inputs.begin(), c.inputs.end());
    for (const auto& s : subset)
      if (!inputs.contains(s)) throw InvalidArgument("input subset names unknown input " + s);
  } else {
    if (c.inputs.empty()) throw LockError("circuit has no primary inputs");
    if (kappa > c.inputs.size() && !p.allow_duplicate_inputs)
      throw LockError("key size " + std::to_string(kappa) + " exceeds " + std::to_string(c.inputs.size()) +
                      " primary inputs");
    std::vector<std::string> order = c.inputs;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t i = 0; i < kappa; ++i) subset.push_back(order[i % order.size()]);
  }

  // Flip the output with the largest fan-in cone; it must have a driver.
  const auto cones = fanin_cone_sizes(c);
  std::unordered_map<std::string, std::size_t> gate_of;
  for (std::size_t g = 0; g < c.gates.size(); ++g) gate_of.emplace(c.gates[g].output, g);
  std::optional<std::size_t> target;
  for (std::size_t o = 0; o < c.outputs.size(); ++o) {
    if (!gate_of.contains(c.outputs[o])) continue;
    if (!target || cones[o] > cones[*target]) target = o;
  }
  if (!target) throw LockError("no output is driven by a gate");

  const auto ports = key_ports(kappa);
  Key key = random_key(ports, rng);
  Circuit locked = c;
  locked.key_inputs = ports;
  NameAllocator names(c, "sl");

  std::vector<std::string> match, mask;
  std::unordered_map<std::string, std::string> inverted;
  for (std::size_t i = 0; i < kappa; ++i) {
    std::string m = names.fresh();
    locked.gates.push_back({m, GateKind::Xnor, {subset[i], ports[i]}});
    match.push_back(m);
    if (key.bits[i]) {
      mask.push_back(ports[i]);
    } else {
      std::string n = names.fresh();
      locked.gates.push_back({n, GateKind::Not, {ports[i]}});
      mask.push_back(n);
    }
  }
  const std::string e = append_tree(locked, names, GateKind::And, GateKind::And, match);
  const std::string not_m = append_tree(locked, names, GateKind::And, GateKind::Nand, mask);
  const std::string flip = names.fresh();
  locked.gates.push_back({flip, GateKind::And, {e, not_m}});

  const std::string& y = c.outputs[*target];
  std::string moved = names.fresh();
  locked.gates[gate_of.at(y)].output = moved;
  // A wire read elsewhere keeps its unflipped value there.
  for (auto& g : locked.gates)
    for (auto& f : g.fanin)
      if (f == y) f = moved;
  locked.gates.push_back({y, GateKind::Xor, {moved, flip}});

  locked = topologically_sorted(locked);
  auto lc = LockedCircuit::verified(std::move(locked), Scheme::Sarlock, {key}, original, p.oracle);
  return {std::move(lc), key};
}

Circuit apply_key(const Circuit& locked, const Key& k) {
  if (k.width() != locked.key_inputs.size())
    throw InvalidArgument("key width " + std::to_string(k.width()) + " does not match " +
                          std::to_string(locked.key_inputs.size()) + " key ports");
  Circuit bound = locked;
  bound.key_inputs.clear();
  std::vector<Gate> gates;
  gates.reserve(locked.gates.size() + k.width());
  for (std::size_t i = 0; i < k.width(); ++i)
    gates.push_back({locked.key_inputs[i], k.bits[i] ? GateKind::Const1 : GateKind::Const0, {}});
  gates.insert(gates.end(), locked.gates.begin(), locked.gates.end());
  bound.gates = std::move(gates);
  return propagate_constants(bound);
}

Circuit apply_key(const LockedCircuit& lc, const Key& k) { return apply_key(lc.circuit(), k); }

Verdict is_correct_key(const LockedCircuit& lc, const Circuit& original, const Key& k, const OracleConfig& oracle) {
  if (k.width() != lc.key_size())
    throw InvalidArgument("key width " + std::to_string(k.width()) + " does not match " +
                          std::to_string(lc.key_size()) + " key ports");
  EquivalenceChecker checker(original, lc.circuit());
  return checker.check({}, k.bits, oracle);
}

}  // namespace decor
