#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace decor {

class Rng;

/// Gate kinds. Const0/Const1 are internal pseudo-gates with no fan-in; they
/// never appear in emitted BENCH text.
enum class GateKind : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buf, Const0, Const1 };

std::string_view to_string(GateKind kind);
/// Case-insensitive; accepts INV for NOT and BUFF for BUF.
std::optional<GateKind> parse_gate_kind(std::string_view text);

/// True when the output is the complement of the base operator.
bool is_inverting(GateKind kind);
/// AND/OR/XOR for AND/NAND, OR/NOR, XOR/XNOR; BUF for NOT/BUF.
GateKind base_operator(GateKind kind);
/// Same operator with the output complemented (AND <-> NAND, NOT <-> BUF, ...).
GateKind complemented(GateKind kind);
bool is_constant(GateKind kind);

struct Gate {
  std::string output;
  GateKind kind = GateKind::Buf;
  std::vector<std::string> fanin;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gate-level combinational netlist. Key ports are kept apart from primary
/// inputs; ports and gates keep their declaration order.
struct Circuit {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> key_inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;

  std::size_t source_count() const { return inputs.size() + key_inputs.size(); }
};

/// Same ports (in order) and same gates (in order); the name is ignored.
bool structurally_equal(const Circuit& a, const Circuit& b);

/// Key ports are recognised by this name prefix.
inline constexpr std::string_view kKeyPortPrefix = "keyinput";
bool is_key_port_name(std::string_view name);
std::string key_port_name(std::size_t index);

struct Diagnostic {
  std::size_t line = 0;  // 0 when not tied to a source line
  std::string net;
  std::string message;
};

/// Renders `file:line: message` (or `file: message` without a line).
std::string render(const Diagnostic& d, std::string_view file);

/// Empty iff every Circuit invariant holds.
std::vector<Diagnostic> check_well_formed(const Circuit& c);
std::vector<Diagnostic> check_well_formed(const Circuit& c, const std::vector<std::size_t>& gate_lines);

/// Throws CircuitError carrying the first diagnostic.
void require_well_formed(const Circuit& c);

/// Indexed view of a well-formed circuit. Node ids: primary inputs, then key
/// inputs, then one node per gate in `c.gates` order.
class CircuitGraph {
 public:
  enum class NodeType : std::uint8_t { Input, KeyInput, Gate };

  explicit CircuitGraph(const Circuit& c);

  std::size_t node_count() const { return names_.size(); }
  std::size_t source_count() const { return sources_; }
  std::size_t gate_node(std::size_t gate_index) const { return sources_ + gate_index; }
  std::size_t gate_index(std::size_t node) const { return node - sources_; }
  bool is_gate(std::size_t node) const { return node >= sources_; }
  NodeType type(std::size_t node) const;

  const std::string& name(std::size_t node) const { return names_[node]; }
  std::optional<std::size_t> find(std::string_view net) const;
  std::size_t at(std::string_view net) const;

  const std::vector<std::size_t>& fanin(std::size_t node) const { return fanin_[node]; }
  /// Gate nodes reading this node, in gate declaration order.
  const std::vector<std::size_t>& sinks(std::size_t node) const { return sinks_[node]; }
  bool is_output(std::size_t node) const { return is_output_[node]; }

  /// Gate indices in a valid evaluation order (stable w.r.t. declaration order).
  const std::vector<std::size_t>& topo_order() const { return topo_; }
  /// Position of each gate node in topo_order(); sources map to 0.
  std::size_t topo_rank(std::size_t node) const { return rank_[node]; }

  GateKind kind(std::size_t node) const;

 private:
  std::size_t inputs_;
  std::size_t sources_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<GateKind> kinds_;
  std::vector<std::vector<std::size_t>> fanin_;
  std::vector<std::vector<std::size_t>> sinks_;
  std::vector<bool> is_output_;
  std::vector<std::size_t> topo_;
  std::vector<std::size_t> rank_;
};

/// Copy with gates reordered topologically (stable).
Circuit topologically_sorted(const Circuit& c);

/// Decomposes gates with fan-in > 2 into balanced 2-input trees.
Circuit normalize_two_input(const Circuit& c);

/// Area proxy: each gate counts max(1, fanin - 1) two-input equivalents.
std::size_t two_input_gate_count(const Circuit& c);

/// Drops gates whose outputs do not reach a primary output.
Circuit remove_dead_gates(const Circuit& c);

/// Moves key ports to the primary inputs, renaming them so they no longer
/// carry the key prefix. Used when an attacker re-locks a locked netlist.
Circuit demote_key_ports(const Circuit& c, std::string_view prefix = "tk");

/// Hands out net names that are not yet used in a circuit.
class NameAllocator {
 public:
  explicit NameAllocator(const Circuit& c, std::string prefix = "n");
  std::string fresh();
  std::string fresh(std::string_view hint);
  void reserve(const std::string& name) { used_.insert(name); }

 private:
  std::unordered_set<std::string> used_;
  std::string prefix_;
  std::size_t counter_ = 0;
};

/// Appends a balanced 2-input tree of `kind` over `leaves` whose root gate is
/// `root_kind` (complemented forms allowed); returns the root net. A single
/// leaf is returned as is, or through a NOT when `root_kind` differs.
std::string append_tree(Circuit& c, NameAllocator& names, GateKind kind, GateKind root_kind,
                        std::vector<std::string> leaves);

struct RandomCircuitSpec {
  std::size_t inputs = 16;
  std::size_t outputs = 8;
  std::size_t gates = 100;
  /// Fan-in choices favour nets defined within this many positions.
  std::size_t locality = 64;
};

/// Seeded synthetic combinational circuit made of 2-input gates plus NOTs.
/// Every gate reaches a primary output.
Circuit generate_random_circuit(const RandomCircuitSpec& spec, Rng& rng, std::string name = "synthetic");

}  // namespace decor
