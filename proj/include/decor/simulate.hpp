#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decor/kernels.hpp"
#include "decor/netlist.hpp"

namespace decor {

class Rng;

/// Port name -> value.
using Assignment = std::map<std::string, bool>;

/// Source-major pattern matrix: row s holds `words` words for source s.
struct PatternBlock {
  std::size_t sources = 0;
  std::size_t patterns = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> data;

  std::uint64_t* row(std::size_t s) { return data.data() + s * words; }
  const std::uint64_t* row(std::size_t s) const { return data.data() + s * words; }
  /// Mask of meaningful bits in the last word.
  std::uint64_t tail_mask() const;
};

/// All 2^n assignments of n variables. Pattern p assigns variable j the bit
/// (p >> (n - 1 - j)) & 1, so rows ascend in binary with variable 0 as MSB.
/// Padding patterns in the last word repeat pattern p mod 2^n.
PatternBlock exhaustive_patterns(std::size_t n);
PatternBlock random_patterns(std::size_t n, std::size_t patterns, Rng& rng);

/// Compiled bit-parallel evaluator. Sources are the circuit's primary inputs
/// followed by its key inputs.
class Simulator {
 public:
  explicit Simulator(const Circuit& c, kernels::Isa isa = kernels::active_isa());

  std::size_t source_count() const { return source_names_.size(); }
  std::size_t output_count() const { return output_nodes_.size(); }
  std::size_t node_count() const { return node_count_; }
  const std::vector<std::string>& source_names() const { return source_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }
  const CircuitGraph& graph() const { return graph_; }

  /// Returns an output-major block (output_count rows of in.words words).
  /// `flip_node` complements that node after it is computed.
  std::vector<std::uint64_t> run(const PatternBlock& in, std::optional<std::size_t> flip_node = std::nullopt) const;

 private:
  CircuitGraph graph_;
  kernels::Isa isa_;
  std::size_t node_count_ = 0;
  std::vector<kernels::GateOp> ops_;
  std::vector<std::uint32_t> fanin_;
  std::vector<std::size_t> op_of_node_;  // index into ops_ for gate nodes
  std::vector<std::string> source_names_;
  std::vector<std::string> output_names_;
  std::vector<std::uint32_t> output_nodes_;
};

/// Evaluates one pattern. `a` must cover every source port; unknown names
/// are rejected.
Assignment evaluate(const Circuit& c, const Assignment& a);

/// Output columns for all 2^|sources| rows.
class TruthTable {
 public:
  TruthTable(std::size_t variables, std::vector<std::string> outputs, std::vector<std::uint64_t> bits, std::size_t words);

  std::size_t variables() const { return variables_; }
  std::size_t rows() const { return std::size_t{1} << variables_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  bool at(std::size_t output, std::size_t row) const;
  std::vector<bool> row(std::size_t r) const;
  /// Output column as a bit sequence, row 0 first.
  std::vector<bool> column(std::size_t output) const;
  /// Rows where any output differs.
  std::size_t differing_rows(const TruthTable& other) const;
  std::size_t differing_rows(const TruthTable& other, std::size_t output) const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::size_t variables_;
  std::vector<std::string> outputs_;
  std::vector<std::uint64_t> bits_;  // output-major
  std::size_t words_;
};

inline constexpr std::size_t kDefaultTruthTableLimit = 20;

/// Enumerates every source port (inputs, then key inputs).
TruthTable truth_table(const Circuit& c, std::size_t limit = kDefaultTruthTableLimit);
/// Binds the key ports to `key_bits` and enumerates the primary inputs.
TruthTable truth_table_under_key(const Circuit& c, std::span<const std::uint8_t> key_bits,
                                 std::size_t limit = kDefaultTruthTableLimit);

struct OracleConfig {
  std::size_t limit = 20;
  std::size_t samples = 10000;
  std::uint64_t seed = 0x0dec0a11ULL;
};

struct Verdict {
  enum class Kind { Equivalent, Inequivalent, Inconclusive };
  Kind kind = Kind::Inconclusive;
  /// Primary-input counterexample when inequivalent.
  Assignment witness;

  bool equivalent() const { return kind == Kind::Equivalent; }
  bool inequivalent() const { return kind == Kind::Inequivalent; }
  /// Not refuted: equivalent, or inconclusive after sampling.
  bool accepted() const { return kind != Kind::Inequivalent; }
};

std::string_view to_string(Verdict::Kind kind);

/// Compares two circuits with the same primary inputs and outputs (matched by
/// name). Each side may carry key ports; they are bound per check.
class EquivalenceChecker {
 public:
  EquivalenceChecker(const Circuit& a, const Circuit& b);

  std::size_t input_count() const { return inputs_.size(); }

  /// Exhaustive when input_count() <= cfg.limit, otherwise cfg.samples seeded
  /// random patterns (never reports Equivalent in that case).
  Verdict check(std::span<const std::uint8_t> key_a, std::span<const std::uint8_t> key_b, const OracleConfig& cfg) const;

 private:
  PatternBlock bind(const PatternBlock& inputs, const Simulator& sim, const std::vector<std::size_t>& input_map,
                    std::span<const std::uint8_t> key) const;

  Simulator sim_a_;
  Simulator sim_b_;
  std::vector<std::string> inputs_;
  std::vector<std::size_t> map_a_;  // inputs_ index -> source row of a
  std::vector<std::size_t> map_b_;
  std::vector<std::size_t> out_b_for_a_;  // output row of a -> output row of b
};

/// For every node in `nodes`, whether complementing it changes some output on
/// at least one pattern of `patterns`.
std::vector<bool> observability(const Simulator& sim, std::span<const std::size_t> nodes, const PatternBlock& patterns);

}  // namespace decor
