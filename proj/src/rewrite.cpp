#include "decor/rewrite.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

bool is_and_or(GateKind k) {
  return k == GateKind::And || k == GateKind::Nand || k == GateKind::Or || k == GateKind::Nor;
}

// Mutable netlist with fan-out bookkeeping. Gates are never moved; removed
// gates are tombstoned and dropped by finish().
class Editor {
 public:
  explicit Editor(const Circuit& c) : base_(c), names_(c, "rw") {
    gates_ = c.gates;
    alive_.assign(gates_.size(), true);
    for (std::size_t g = 0; g < gates_.size(); ++g) driver_.emplace(gates_[g].output, g);
    for (const auto& g : gates_)
      for (const auto& f : g.fanin) ++fanout_[f];
    for (const auto& o : c.outputs) outputs_.insert(o);
    for (std::size_t g = 0; g < gates_.size(); ++g)
      if (gates_[g].kind == GateKind::Not) not_of_.emplace(gates_[g].fanin[0], gates_[g].output);
  }

  std::size_t size() const { return gates_.size(); }
  bool alive(std::size_t g) const { return alive_[g]; }
  const Gate& gate(std::size_t g) const { return gates_[g]; }

  std::size_t driver(const std::string& net) const {
    auto it = driver_.find(net);
    return it == driver_.end() || !alive_[it->second] ? kNone : it->second;
  }
  int fanout(const std::string& net) const {
    auto it = fanout_.find(net);
    return it == fanout_.end() ? 0 : it->second;
  }
  bool is_output(const std::string& net) const { return outputs_.contains(net); }
  // Net read by exactly one gate and not a port: safe to restructure.
  bool private_net(const std::string& net) const { return fanout(net) == 1 && !is_output(net); }

  std::size_t kind_of(const std::string& net, GateKind kind) const {
    std::size_t d = driver(net);
    return d != kNone && gates_[d].kind == kind ? d : kNone;
  }

  std::string add(GateKind kind, std::vector<std::string> fanin) {
    Gate g{names_.fresh(), kind, std::move(fanin)};
    for (const auto& f : g.fanin) ++fanout_[f];
    driver_.emplace(g.output, gates_.size());
    if (kind == GateKind::Not) not_of_.insert_or_assign(g.fanin[0], g.output);
    gates_.push_back(g);
    alive_.push_back(true);
    return g.output;
  }

  void set_fanin(std::size_t g, std::size_t j, const std::string& net) {
    std::string old = gates_[g].fanin[j];
    ++fanout_[net];
    gates_[g].fanin[j] = net;
    release(old);
  }

  void replace(std::size_t g, GateKind kind, std::vector<std::string> fanin) {
    for (const auto& f : fanin) ++fanout_[f];
    std::vector<std::string> old = std::move(gates_[g].fanin);
    gates_[g].kind = kind;
    gates_[g].fanin = std::move(fanin);
    if (kind == GateKind::Not) not_of_.insert_or_assign(gates_[g].fanin[0], gates_[g].output);
    for (const auto& f : old) release(f);
  }

  // Complement of `net`, reusing an existing inverter or peeling one off.
  std::string invert(const std::string& net) {
    if (std::size_t d = kind_of(net, GateKind::Not); d != kNone) return gates_[d].fanin[0];
    if (auto it = not_of_.find(net); it != not_of_.end()) {
      std::size_t d = kind_of(it->second, GateKind::Not);
      if (d != kNone && gates_[d].fanin[0] == net) return it->second;
    }
    return add(GateKind::Not, {net});
  }

  // Like invert(), but a private reducing driver is complemented in place and
  // a private XOR-family driver passes the inversion to a gate-driven fan-in.
  std::string invert_private(const std::string& net) {
    std::size_t d = driver(net);
    if (d == kNone || !private_net(net)) return invert(net);
    const GateKind k = gates_[d].kind;
    if (is_and_or(k)) {
      gates_[d].kind = complemented(k);
      return net;
    }
    if (k == GateKind::Xor || k == GateKind::Xnor) {
      for (std::size_t j = 0; j < gates_[d].fanin.size(); ++j) {
        const std::string in = gates_[d].fanin[j];
        if (driver(in) == kNone) continue;
        set_fanin(d, j, invert_private(in));
        return net;
      }
    }
    return invert(net);
  }

  Circuit finish() {
    Circuit out = base_;
    out.gates.clear();
    for (std::size_t g = 0; g < gates_.size(); ++g)
      if (alive_[g]) out.gates.push_back(gates_[g]);
    return topologically_sorted(out);
  }

  void hold(const std::string& net) { ++fanout_[net]; }
  void release(const std::string& net) {
    int& n = fanout_[net];
    --n;
    if (n > 0 || outputs_.contains(net)) return;
    std::size_t d = driver(net);
    if (d == kNone) return;
    alive_[d] = false;
    std::vector<std::string> fanin = std::move(gates_[d].fanin);
    gates_[d].fanin.clear();
    for (const auto& f : fanin) release(f);
  }

 private:
  const Circuit& base_;
  NameAllocator names_;
  std::vector<Gate> gates_;
  std::vector<bool> alive_;
  std::unordered_map<std::string, std::size_t> driver_;
  std::unordered_map<std::string, int> fanout_;
  std::unordered_set<std::string> outputs_;
  std::unordered_map<std::string, std::string> not_of_;
};

enum class Rewrite { DeMorgan, SplitXor, AbsorbNot, InsertDoubleNot, EliminateDoubleNot, Regroup };

GateKind de_morgan_dual(GateKind k) {
  switch (k) {
    case GateKind::And: return GateKind::Nor;
    case GateKind::Nor: return GateKind::And;
    case GateKind::Or: return GateKind::Nand;
    case GateKind::Nand: return GateKind::Or;
    default: return k;
  }
}

// Fan-in position j of g whose driver is NOT(NOT(x)), or kNone.
std::size_t double_not_fanin(const Editor& ed, std::size_t g) {
  const Gate& gate = ed.gate(g);
  for (std::size_t j = 0; j < gate.fanin.size(); ++j) {
    std::size_t d1 = ed.kind_of(gate.fanin[j], GateKind::Not);
    if (d1 == kNone) continue;
    if (ed.kind_of(ed.gate(d1).fanin[0], GateKind::Not) != kNone) return j;
  }
  return kNone;
}

// Fan-in position of a private 2-input driver with g's base operator.
std::size_t regroup_fanin(const Editor& ed, std::size_t g) {
  const Gate& gate = ed.gate(g);
  if (gate.fanin.size() != 2) return kNone;
  const GateKind op = base_operator(gate.kind);
  if (op != GateKind::And && op != GateKind::Or && op != GateKind::Xor) return kNone;
  for (std::size_t j = 0; j < 2; ++j) {
    std::size_t d = ed.kind_of(gate.fanin[j], op);
    if (d != kNone && ed.private_net(gate.fanin[j]) && ed.gate(d).fanin.size() == 2 &&
        gate.fanin[0] != gate.fanin[1])
      return j;
  }
  return kNone;
}

bool absorbable(const Editor& ed, std::size_t g) {
  const Gate& gate = ed.gate(g);
  if (gate.kind != GateKind::Not) return false;
  std::size_t d = ed.driver(gate.fanin[0]);
  return d != kNone && is_and_or(ed.gate(d).kind) && ed.private_net(gate.fanin[0]);
}

void apply(Editor& ed, std::size_t g, Rewrite r, Rng& rng) {
  switch (r) {
    case Rewrite::DeMorgan: {
      std::vector<std::string> fanin = ed.gate(g).fanin;
      // Held until replace() owns them, so later inversions cannot kill them.
      for (auto& f : fanin) {
        f = ed.invert_private(f);
        ed.hold(f);
      }
      ed.replace(g, de_morgan_dual(ed.gate(g).kind), fanin);
      for (const auto& f : fanin) ed.release(f);
      break;
    }
    case Rewrite::SplitXor: {
      const GateKind inner = ed.gate(g).kind == GateKind::Xnor ? GateKind::Xor : GateKind::Xnor;
      std::string t = ed.add(inner, ed.gate(g).fanin);
      ed.replace(g, GateKind::Not, {t});
      break;
    }
    case Rewrite::AbsorbNot: {
      const Gate& inner = ed.gate(ed.driver(ed.gate(g).fanin[0]));
      ed.replace(g, complemented(inner.kind), inner.fanin);
      break;
    }
    case Rewrite::InsertDoubleNot: {
      std::size_t j = rng.below(ed.gate(g).fanin.size());
      std::string t1 = ed.add(GateKind::Not, {ed.gate(g).fanin[j]});
      std::string t2 = ed.add(GateKind::Not, {t1});
      ed.set_fanin(g, j, t2);
      break;
    }
    case Rewrite::EliminateDoubleNot: {
      std::size_t j = double_not_fanin(ed, g);
      const std::string& outer = ed.gate(g).fanin[j];
      std::string x = ed.gate(ed.driver(ed.gate(ed.driver(outer)).fanin[0])).fanin[0];
      ed.set_fanin(g, j, x);
      break;
    }
    case Rewrite::Regroup: {
      // OP(OP(a, b), c) -> OP(a, OP(b, c)); the inner gate keeps its name.
      std::size_t j = regroup_fanin(ed, g);
      const std::string inner_net = ed.gate(g).fanin[j];
      const std::string other = ed.gate(g).fanin[1 - j];
      std::size_t inner = ed.driver(inner_net);
      const std::string a = ed.gate(inner).fanin[0];
      const std::string b = ed.gate(inner).fanin[1];
      ed.hold(a);
      ed.hold(other);
      ed.replace(inner, ed.gate(inner).kind, {b, other});
      ed.replace(g, ed.gate(g).kind, {a, inner_net});
      ed.release(a);
      ed.release(other);
      break;
    }
  }
}

// Size-reducing rewrites are favoured so repeated sweeps do not inflate the
// netlist.
double weight(Rewrite r) {
  static constexpr double w[] = {0.25, 0.05, 2, 0.25, 2, 0.25};
  return w[static_cast<int>(r)];
}

Rewrite pick(const std::vector<Rewrite>& options, Rng& rng) {
  double total = 0;
  for (Rewrite r : options) total += weight(r);
  double x = rng.unit() * total;
  for (Rewrite r : options) {
    x -= weight(r);
    if (x < 0) return r;
  }
  return options.back();
}

}  // namespace

Circuit rewrite_randomized(const Circuit& c, Rng& rng, std::size_t passes) {
  if (passes == 0) return c;
  Circuit current = topologically_sorted(c);
  for (std::size_t pass = 0; pass < passes; ++pass) {
    Editor ed(current);
    const std::size_t visit = ed.size();
    std::vector<Rewrite> options;
    for (std::size_t g = 0; g < visit; ++g) {
      if (!ed.alive(g) || is_constant(ed.gate(g).kind)) continue;
      if (!rng.coin()) continue;
      options.clear();
      const GateKind k = ed.gate(g).kind;
      if (is_and_or(k)) options.push_back(Rewrite::DeMorgan);
      if (k == GateKind::Xor || k == GateKind::Xnor) options.push_back(Rewrite::SplitXor);
      if (absorbable(ed, g)) options.push_back(Rewrite::AbsorbNot);
      if (k != GateKind::Not && k != GateKind::Buf) options.push_back(Rewrite::InsertDoubleNot);
      if (double_not_fanin(ed, g) != kNone) options.push_back(Rewrite::EliminateDoubleNot);
      if (regroup_fanin(ed, g) != kNone) options.push_back(Rewrite::Regroup);
      std::erase_if(options, [](Rewrite r) { return weight(r) <= 0; });
      if (options.empty()) continue;
      apply(ed, g, pick(options, rng), rng);
    }
    for (std::size_t g = 0; g < ed.size(); ++g)
      while (ed.alive(g) && double_not_fanin(ed, g) != kNone) apply(ed, g, Rewrite::EliminateDoubleNot, rng);
    current = ed.finish();
  }
  return current;
}

Circuit absorb_inverters(const Circuit& c, bool through_xor_inputs) {
  Circuit current = topologically_sorted(c);
  Rng unused(0);
  for (bool changed = true; changed;) {
    changed = false;
    Editor ed(current);
    for (std::size_t g = 0; g < ed.size(); ++g) {
      if (!ed.alive(g)) continue;
      const Gate& gate = ed.gate(g);
      if (gate.kind == GateKind::Not) {
        const std::string& in = gate.fanin[0];
        std::size_t d = ed.driver(in);
        if (d == kNone || !ed.private_net(in)) continue;
        const GateKind k = ed.gate(d).kind;
        if (!is_and_or(k) && k != GateKind::Xor && k != GateKind::Xnor) continue;
        ed.replace(g, complemented(k), ed.gate(d).fanin);
        changed = true;
      } else if (through_xor_inputs && (gate.kind == GateKind::Xor || gate.kind == GateKind::Xnor)) {
        std::vector<std::string> fanin = gate.fanin;
        bool flip = false;
        for (auto& f : fanin)
          if (std::size_t d = ed.kind_of(f, GateKind::Not); d != kNone) {
            f = ed.gate(d).fanin[0];
            flip = !flip;
            changed = true;
          }
        if (fanin != gate.fanin) ed.replace(g, flip ? complemented(gate.kind) : gate.kind, std::move(fanin));
      }
    }
    for (std::size_t g = 0; g < ed.size(); ++g)
      while (ed.alive(g) && double_not_fanin(ed, g) != kNone) apply(ed, g, Rewrite::EliminateDoubleNot, unused);
    current = ed.finish();
  }
  return current;
}

Circuit synthesize(const Circuit& c, Rng& rng, std::size_t passes) {
  if (passes == 0) return c;
  return absorb_inverters(rewrite_randomized(c, rng, passes));
}

Circuit propagate_constants(const Circuit& c) {
  CircuitGraph graph(c);
  // Per net: constant value, or the net that now carries its value.
  struct Value {
    int constant = -1;  // -1 unknown, 0/1 constant
    std::string net;
  };
  std::unordered_map<std::string, Value> value;
  for (const auto& n : c.inputs) value[n] = {-1, n};
  for (const auto& n : c.key_inputs) value[n] = {-1, n};

  Circuit out = c;
  out.gates.clear();
  NameAllocator names(c, "cp");
  std::unordered_map<std::string, std::string> inverters;  // net -> NOT(net) emitted

  for (std::size_t gi : graph.topo_order()) {
    const Gate& g = c.gates[gi];
    const GateKind op = base_operator(g.kind);
    bool invert = is_inverting(g.kind);
    std::vector<std::string> live;
    int forced = -1;
    if (is_constant(g.kind)) {
      forced = g.kind == GateKind::Const1 ? 1 : 0;
      invert = false;
    }
    for (const auto& f : g.fanin) {
      const Value& v = value.at(f);
      if (v.constant < 0) {
        live.push_back(v.net);
        continue;
      }
      const bool bit = v.constant == 1;
      if (op == GateKind::And) {
        if (!bit) forced = 0;
      } else if (op == GateKind::Or) {
        if (bit) forced = 1;
      } else if (op == GateKind::Xor || op == GateKind::Buf) {
        if (bit) invert = !invert;
        if (op == GateKind::Buf) forced = 0;  // BUF/NOT of a constant: value is `invert`
      }
    }
    Value result;
    if (forced >= 0) {
      result.constant = forced ^ (invert ? 1 : 0);
    } else if (live.empty()) {
      // AND of all-ones, OR of all-zeros, XOR of constants
      const int base = op == GateKind::And ? 1 : 0;
      result.constant = base ^ (invert ? 1 : 0);
    } else if (live.size() == 1 || op == GateKind::Buf) {
      if (!invert) {
        result.net = live.front();
      } else if (auto it = inverters.find(live.front()); it != inverters.end()) {
        result.net = it->second;
      } else {
        out.gates.push_back({g.output, GateKind::Not, {live.front()}});
        inverters.emplace(live.front(), g.output);
        result.net = g.output;
      }
    } else {
      GateKind kind = invert ? complemented(op) : op;
      out.gates.push_back({g.output, kind, live});
      result.net = g.output;
    }
    value[g.output] = std::move(result);
  }

  // Output ports keep their names.
  std::unordered_set<std::string> emitted;
  for (const auto& gate : out.gates) emitted.insert(gate.output);
  for (const auto& o : c.outputs) {
    const Value& v = value.at(o);
    if (v.constant >= 0) {
      if (emitted.insert(o).second) out.gates.push_back({o, v.constant ? GateKind::Const1 : GateKind::Const0, {}});
    } else if (v.net != o) {
      if (emitted.insert(o).second) out.gates.push_back({o, GateKind::Buf, {v.net}});
    }
  }
  return remove_dead_gates(topologically_sorted(out));
}

}  // namespace decor
