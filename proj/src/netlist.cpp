#include "decor/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <queue>

#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

bool arity_ok(GateKind kind, std::size_t n) {
  switch (kind) {
    case GateKind::Not:
    case GateKind::Buf:
      return n == 1;
    case GateKind::Const0:
    case GateKind::Const1:
      return n == 0;
    default:
      return n >= 2;
  }
}

std::string arity_message(const Gate& g) {
  std::string kind(to_string(g.kind));
  if (g.kind == GateKind::Not || g.kind == GateKind::Buf) return kind + " gate " + g.output + " requires exactly 1 fan-in";
  if (is_constant(g.kind)) return "constant " + g.output + " must have no fan-in";
  return kind + " gate " + g.output + " requires at least 2 fan-ins";
}

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not: return "NOT";
    case GateKind::Buf: return "BUF";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
  }
  return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view text) {
  const std::string u = upper(text);
  if (u == "AND") return GateKind::And;
  if (u == "NAND") return GateKind::Nand;
  if (u == "OR") return GateKind::Or;
  if (u == "NOR") return GateKind::Nor;
  if (u == "XOR") return GateKind::Xor;
  if (u == "XNOR") return GateKind::Xnor;
  if (u == "NOT" || u == "INV") return GateKind::Not;
  if (u == "BUF" || u == "BUFF") return GateKind::Buf;
  return std::nullopt;
}

bool is_inverting(GateKind kind) {
  return kind == GateKind::Nand || kind == GateKind::Nor || kind == GateKind::Xnor || kind == GateKind::Not;
}

GateKind base_operator(GateKind kind) {
  switch (kind) {
    case GateKind::Nand: return GateKind::And;
    case GateKind::Nor: return GateKind::Or;
    case GateKind::Xnor: return GateKind::Xor;
    case GateKind::Not: return GateKind::Buf;
    default: return kind;
  }
}

GateKind complemented(GateKind kind) {
  switch (kind) {
    case GateKind::And: return GateKind::Nand;
    case GateKind::Nand: return GateKind::And;
    case GateKind::Or: return GateKind::Nor;
    case GateKind::Nor: return GateKind::Or;
    case GateKind::Xor: return GateKind::Xnor;
    case GateKind::Xnor: return GateKind::Xor;
    case GateKind::Not: return GateKind::Buf;
    case GateKind::Buf: return GateKind::Not;
    case GateKind::Const0: return GateKind::Const1;
    case GateKind::Const1: return GateKind::Const0;
  }
  return kind;
}

bool is_constant(GateKind kind) { return kind == GateKind::Const0 || kind == GateKind::Const1; }

bool structurally_equal(const Circuit& a, const Circuit& b) {
  return a.inputs == b.inputs && a.key_inputs == b.key_inputs && a.outputs == b.outputs && a.gates == b.gates;
}

bool is_key_port_name(std::string_view name) { return name.starts_with(kKeyPortPrefix); }

std::string key_port_name(std::size_t index) { return std::string(kKeyPortPrefix) + std::to_string(index); }

std::string render(const Diagnostic& d, std::string_view file) {
  std::string out(file);
  if (d.line != 0) out += ":" + std::to_string(d.line);
  return out + ": " + d.message;
}

std::vector<Diagnostic> check_well_formed(const Circuit& c) { return check_well_formed(c, {}); }

std::vector<Diagnostic> check_well_formed(const Circuit& c, const std::vector<std::size_t>& gate_lines) {
  std::vector<Diagnostic> out;
  auto line_of = [&](std::size_t g) { return g < gate_lines.size() ? gate_lines[g] : std::size_t{0}; };

  // net -> defining gate index, or npos for ports
  constexpr std::size_t kPort = static_cast<std::size_t>(-1);
  std::unordered_map<std::string, std::size_t> defined;
  auto define = [&](const std::string& net, std::size_t who, std::size_t line) {
    if (!defined.emplace(net, who).second) out.push_back({line, net, "duplicate definition " + net});
  };
  for (const auto& n : c.inputs) define(n, kPort, 0);
  for (const auto& n : c.key_inputs) define(n, kPort, 0);
  for (std::size_t g = 0; g < c.gates.size(); ++g) define(c.gates[g].output, g, line_of(g));

  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    if (!arity_ok(gate.kind, gate.fanin.size())) out.push_back({line_of(g), gate.output, arity_message(gate)});
    for (const auto& f : gate.fanin) {
      if (!defined.contains(f)) out.push_back({line_of(g), f, "undefined net " + f});
    }
  }

  std::unordered_set<std::string> seen_outputs;
  for (const auto& o : c.outputs) {
    if (!defined.contains(o)) out.push_back({0, o, "undefined output " + o});
    if (!seen_outputs.insert(o).second) out.push_back({0, o, "duplicate output " + o});
  }

  // Kahn's algorithm over gates whose fan-ins are all defined.
  std::vector<std::size_t> pending(c.gates.size(), 0);
  std::unordered_map<std::string, std::vector<std::size_t>> readers;
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    for (const auto& f : c.gates[g].fanin) {
      auto it = defined.find(f);
      if (it != defined.end() && it->second != kPort) {
        ++pending[g];
        readers[f].push_back(g);
      }
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t g = 0; g < c.gates.size(); ++g)
    if (pending[g] == 0) ready.push_back(g);
  std::vector<bool> done(c.gates.size(), false);
  while (!ready.empty()) {
    std::size_t g = ready.back();
    ready.pop_back();
    done[g] = true;
    auto it = readers.find(c.gates[g].output);
    if (it == readers.end()) continue;
    for (std::size_t r : it->second)
      if (--pending[r] == 0) ready.push_back(r);
  }
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    if (!done[g]) {
      out.push_back({line_of(g), c.gates[g].output, "combinational cycle through " + c.gates[g].output});
      break;
    }
  }
  return out;
}

void require_well_formed(const Circuit& c) {
  auto diags = check_well_formed(c);
  if (!diags.empty()) throw CircuitError(diags.front().message);
}

CircuitGraph::CircuitGraph(const Circuit& c) : inputs_(c.inputs.size()), sources_(c.source_count()) {
  const std::size_t total = sources_ + c.gates.size();
  names_.reserve(total);
  for (const auto& n : c.inputs) names_.push_back(n);
  for (const auto& n : c.key_inputs) names_.push_back(n);
  for (const auto& g : c.gates) names_.push_back(g.output);
  index_.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!index_.emplace(names_[i], i).second) throw CircuitError("duplicate definition " + names_[i]);
  }
  kinds_.reserve(c.gates.size());
  fanin_.resize(total);
  sinks_.resize(total);
  is_output_.assign(total, false);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    if (!arity_ok(gate.kind, gate.fanin.size())) throw CircuitError(arity_message(gate));
    kinds_.push_back(gate.kind);
    auto& fi = fanin_[sources_ + g];
    fi.reserve(gate.fanin.size());
    for (const auto& f : gate.fanin) {
      auto it = index_.find(f);
      if (it == index_.end()) throw CircuitError("undefined net " + f);
      fi.push_back(it->second);
      auto& s = sinks_[it->second];
      if (s.empty() || s.back() != sources_ + g) s.push_back(sources_ + g);
    }
  }
  for (const auto& o : c.outputs) {
    auto it = index_.find(o);
    if (it == index_.end()) throw CircuitError("undefined output " + o);
    is_output_[it->second] = true;
  }

  // Stable topological order: always take the lowest declaration index ready.
  std::vector<std::size_t> pending(c.gates.size(), 0);
  for (std::size_t g = 0; g < c.gates.size(); ++g)
    for (std::size_t f : fanin_[sources_ + g])
      if (f >= sources_) ++pending[g];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t g = 0; g < c.gates.size(); ++g)
    if (pending[g] == 0) ready.push(g);
  topo_.reserve(c.gates.size());
  rank_.assign(total, 0);
  while (!ready.empty()) {
    std::size_t g = ready.top();
    ready.pop();
    rank_[sources_ + g] = topo_.size();
    topo_.push_back(g);
    for (std::size_t s : sinks_[sources_ + g]) {
      // a sink may read the same net twice; count each fan-in edge
      std::size_t sg = s - sources_;
      for (std::size_t f : fanin_[s])
        if (f == sources_ + g && --pending[sg] == 0) ready.push(sg);
    }
  }
  if (topo_.size() != c.gates.size()) {
    for (std::size_t g = 0; g < c.gates.size(); ++g)
      if (pending[g] != 0) throw CircuitError("combinational cycle through " + c.gates[g].output);
  }
}

CircuitGraph::NodeType CircuitGraph::type(std::size_t node) const {
  if (node < inputs_) return NodeType::Input;
  if (node < sources_) return NodeType::KeyInput;
  return NodeType::Gate;
}

std::optional<std::size_t> CircuitGraph::find(std::string_view net) const {
  auto it = index_.find(std::string(net));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CircuitGraph::at(std::string_view net) const {
  auto id = find(net);
  if (!id) throw CircuitError("undefined net " + std::string(net));
  return *id;
}

GateKind CircuitGraph::kind(std::size_t node) const { return kinds_.at(node - sources_); }

Circuit topologically_sorted(const Circuit& c) {
  CircuitGraph graph(c);
  Circuit out = c;
  out.gates.clear();
  out.gates.reserve(c.gates.size());
  for (std::size_t g : graph.topo_order()) out.gates.push_back(c.gates[g]);
  return out;
}

Circuit normalize_two_input(const Circuit& c) {
  Circuit out = c;
  out.gates.clear();
  NameAllocator names(c, "norm");
  for (const Gate& g : c.gates) {
    if (g.fanin.size() <= 2) {
      out.gates.push_back(g);
      continue;
    }
    const GateKind op = base_operator(g.kind);
    std::vector<std::string> level = g.fanin;
    while (level.size() > 2) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        std::string n = names.fresh();
        out.gates.push_back({n, op, {level[i], level[i + 1]}});
        next.push_back(std::move(n));
      }
      if (level.size() % 2 == 1) next.push_back(level.back());
      level = std::move(next);
    }
    out.gates.push_back({g.output, g.kind, std::move(level)});
  }
  return out;
}

std::size_t two_input_gate_count(const Circuit& c) {
  std::size_t n = 0;
  for (const Gate& g : c.gates) n += g.fanin.size() > 2 ? g.fanin.size() - 1 : 1;
  return n;
}

Circuit remove_dead_gates(const Circuit& c) {
  CircuitGraph graph(c);
  std::vector<bool> live(graph.node_count(), false);
  std::vector<std::size_t> stack;
  for (const auto& o : c.outputs) {
    std::size_t id = graph.at(o);
    if (!live[id]) {
      live[id] = true;
      stack.push_back(id);
    }
  }
  while (!stack.empty()) {
    std::size_t id = stack.back();
    stack.pop_back();
    for (std::size_t f : graph.fanin(id)) {
      if (!live[f]) {
        live[f] = true;
        stack.push_back(f);
      }
    }
  }
  Circuit out = c;
  out.gates.clear();
  for (std::size_t g = 0; g < c.gates.size(); ++g)
    if (live[graph.gate_node(g)]) out.gates.push_back(c.gates[g]);
  return out;
}

Circuit demote_key_ports(const Circuit& c, std::string_view prefix) {
  Circuit out = c;
  if (c.key_inputs.empty()) return out;
  NameAllocator names(c, std::string(prefix));
  std::unordered_map<std::string, std::string> rename;
  for (const auto& k : c.key_inputs) {
    std::string n = names.fresh(std::string(prefix) + k.substr(kKeyPortPrefix.size()));
    rename.emplace(k, n);
    out.inputs.push_back(std::move(n));
  }
  out.key_inputs.clear();
  for (auto& g : out.gates)
    for (auto& f : g.fanin)
      if (auto it = rename.find(f); it != rename.end()) f = it->second;
  for (auto& o : out.outputs)
    if (auto it = rename.find(o); it != rename.end()) o = it->second;
  return out;
}

NameAllocator::NameAllocator(const Circuit& c, std::string prefix) : prefix_(std::move(prefix)) {
  for (const auto& n : c.inputs) used_.insert(n);
  for (const auto& n : c.key_inputs) used_.insert(n);
  for (const auto& n : c.outputs) used_.insert(n);
  for (const auto& g : c.gates) used_.insert(g.output);
}

std::string NameAllocator::fresh() {
  for (;;) {
    std::string candidate = prefix_ + "_" + std::to_string(counter_++);
    if (used_.insert(candidate).second) return candidate;
  }
}

std::string NameAllocator::fresh(std::string_view hint) {
  std::string candidate(hint);
  if (!is_key_port_name(candidate) && used_.insert(candidate).second) return candidate;
  for (std::size_t i = 1;; ++i) {
    std::string alt = std::string(hint) + "_" + std::to_string(i);
    if (!is_key_port_name(alt) && used_.insert(alt).second) return alt;
  }
}

std::string append_tree(Circuit& c, NameAllocator& names, GateKind kind, GateKind root_kind,
                        std::vector<std::string> leaves) {
  if (leaves.empty()) throw InvalidArgument("gate tree needs at least one leaf");
  if (leaves.size() == 1) {
    if (root_kind == kind) return leaves[0];
    std::string out = names.fresh();
    c.gates.push_back({out, GateKind::Not, {leaves[0]}});
    return out;
  }
  while (leaves.size() > 2) {
    std::vector<std::string> next;
    for (std::size_t i = 0; i + 1 < leaves.size(); i += 2) {
      std::string out = names.fresh();
      c.gates.push_back({out, kind, {leaves[i], leaves[i + 1]}});
      next.push_back(out);
    }
    if (leaves.size() % 2) next.push_back(leaves.back());
    leaves = std::move(next);
  }
  std::string out = names.fresh();
  c.gates.push_back({out, root_kind, {leaves[0], leaves[1]}});
  return out;
}

Circuit generate_random_circuit(const RandomCircuitSpec& spec, Rng& rng, std::string name) {
  if (spec.inputs < 2) throw InvalidArgument("random circuit needs at least 2 inputs");
  if (spec.gates < 1) throw InvalidArgument("random circuit needs at least 1 gate");
  if (spec.outputs < 1) throw InvalidArgument("random circuit needs at least 1 output");

  static constexpr GateKind kKinds[] = {GateKind::And, GateKind::Nand, GateKind::Or,  GateKind::Nor,
                                        GateKind::And, GateKind::Nand, GateKind::Or,  GateKind::Nor,
                                        GateKind::Xor, GateKind::Xnor, GateKind::Not, GateKind::Not};
  Circuit c;
  c.name = std::move(name);
  std::vector<std::string> nets;
  std::vector<std::size_t> uses;
  for (std::size_t i = 0; i < spec.inputs; ++i) {
    c.inputs.push_back("pi" + std::to_string(i));
    nets.push_back(c.inputs.back());
    uses.push_back(0);
  }
  std::vector<std::size_t> unused(nets.size());
  for (std::size_t i = 0; i < unused.size(); ++i) unused[i] = i;

  auto take_unused = [&](std::size_t pos) {
    std::size_t id = unused[pos];
    unused[pos] = unused.back();
    unused.pop_back();
    return id;
  };
  auto pick = [&](std::size_t exclude, std::size_t remaining) -> std::size_t {
    // Drain unused nets fast enough that few are left dangling at the end.
    const bool prefer_unused = !unused.empty() && (unused.size() > remaining || rng.chance(0.5));
    if (prefer_unused) {
      for (int attempt = 0; attempt < 4; ++attempt) {
        std::size_t pos = rng.below(unused.size());
        if (unused[pos] != exclude) return take_unused(pos);
      }
    }
    for (;;) {
      const std::size_t window = std::min(spec.locality, nets.size());
      std::size_t id = rng.chance(0.8) ? nets.size() - 1 - rng.below(window) : rng.below(nets.size());
      if (id != exclude) {
        if (uses[id] == 0) {
          auto it = std::find(unused.begin(), unused.end(), id);
          if (it != unused.end()) take_unused(static_cast<std::size_t>(it - unused.begin()));
        }
        return id;
      }
    }
  };

  for (std::size_t g = 0; g < spec.gates; ++g) {
    GateKind kind = kKinds[rng.below(std::size(kKinds))];
    const std::size_t remaining = spec.gates - g;
    Gate gate;
    gate.output = "g" + std::to_string(g);
    gate.kind = kind;
    std::size_t a = pick(static_cast<std::size_t>(-1), remaining);
    gate.fanin.push_back(nets[a]);
    ++uses[a];
    if (kind != GateKind::Not) {
      std::size_t b = pick(a, remaining);
      gate.fanin.push_back(nets[b]);
      ++uses[b];
    }
    nets.push_back(gate.output);
    uses.push_back(0);
    unused.push_back(nets.size() - 1);
    c.gates.push_back(std::move(gate));
  }

  // Sinkless gates become outputs; surplus ones are merged pairwise.
  std::vector<std::size_t> sinkless;
  for (std::size_t i = spec.inputs; i < nets.size(); ++i)
    if (uses[i] == 0) sinkless.push_back(i);
  std::size_t merge_id = 0;
  while (sinkless.size() > spec.outputs) {
    std::size_t a = sinkless[0], b = sinkless[1];
    Gate gate{"m" + std::to_string(merge_id++), rng.coin() ? GateKind::Xor : GateKind::Or, {nets[a], nets[b]}};
    ++uses[a];
    ++uses[b];
    nets.push_back(gate.output);
    uses.push_back(0);
    c.gates.push_back(std::move(gate));
    sinkless.erase(sinkless.begin(), sinkless.begin() + 2);
    sinkless.push_back(nets.size() - 1);
  }
  for (std::size_t i : sinkless) c.outputs.push_back(nets[i]);
  for (std::size_t i = nets.size(); c.outputs.size() < spec.outputs && i-- > spec.inputs;) {
    if (uses[i] != 0 && std::find(c.outputs.begin(), c.outputs.end(), nets[i]) == c.outputs.end())
      c.outputs.push_back(nets[i]);
  }
  return c;
}

}  // namespace decor
