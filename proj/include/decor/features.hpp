#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decor/netlist.hpp"

namespace decor {

/// Node type codes used in every feature encoding.
enum FeatureCode : std::uint8_t {
  kPad = 0,
  kPrimaryInput = 1,
  kAnd = 2,
  kNand = 3,
  kOr = 4,
  kNor = 5,
  kXor = 6,
  kXnor = 7,
  kNot = 8,
  kBuf = 9,
  kPrimaryOutput = 10,
  kKeyInput = 11,
};
inline constexpr std::size_t kFeatureCodeCount = 12;

std::uint8_t feature_code(GateKind kind);

enum class Encoding { Vector, Subgraph };
std::string_view to_string(Encoding e);
std::optional<Encoding> parse_encoding(std::string_view text);

struct ExtractorParams {
  Encoding encoding = Encoding::Vector;
  /// Vector: levels per side and children kept per node.
  std::size_t depth = 3;
  std::size_t fanin_bound = 2;
  /// Subgraph: neighbourhood radius and codes kept per distance layer.
  std::size_t hops = 2;
  std::size_t layer_width = 8;

  friend bool operator==(const ExtractorParams&, const ExtractorParams&) = default;
};

/// Fixed length of the serialized feature for these parameters.
std::size_t feature_length(const ExtractorParams& p);

/// Vector layout: 1 + 2 * sum_{l=1..d} f^l
std::size_t vector_length(std::size_t depth, std::size_t fanin_bound);

/// Undirected neighbourhood; node 0 is the centre.
struct Subgraph {
  std::vector<std::string> names;
  std::vector<std::uint8_t> codes;
  std::vector<std::size_t> distance;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j
};

/// Read-only index over one netlist used by both extractors.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const Circuit& c);

  const CircuitGraph& graph() const { return graph_; }
  const std::vector<std::string>& key_ports() const { return key_ports_; }

  /// The key port's sink with the lowest (code, topological rank), or the
  /// port itself when it has no sink.
  std::size_t key_gate(std::string_view key_port) const;

  std::vector<std::uint8_t> vector_feature(std::string_view key_port, std::size_t depth, std::size_t fanin_bound) const;
  Subgraph subgraph_feature(std::string_view key_port, std::size_t hops) const;
  std::vector<std::uint8_t> feature(std::string_view key_port, const ExtractorParams& p) const;

 private:
  std::uint8_t code(std::size_t node) const;
  std::vector<std::vector<std::uint8_t>> fanin_levels(std::size_t node, std::size_t depth, std::size_t f) const;
  std::vector<std::vector<std::uint8_t>> fanout_levels(std::size_t node, std::size_t depth, std::size_t f) const;

  CircuitGraph graph_;
  std::vector<std::string> key_ports_;
};

std::vector<std::uint8_t> extract_vector_feature(const Circuit& c, std::string_view key_port, std::size_t depth,
                                                 std::size_t fanin_bound);
Subgraph extract_subgraph_feature(const Circuit& c, std::string_view key_port, std::size_t hops);

/// Centre code, then for each distance layer its codes sorted in descending
/// order, padded with zeros or cut to `layer_width`.
std::vector<std::uint8_t> serialize_subgraph(const Subgraph& s, std::size_t hops, std::size_t layer_width);

/// Isomorphism-invariant label from colour refinement rooted at the centre.
std::uint64_t canonical_hash(const Subgraph& s);

/// Edge-list text block: `node <i> <code> <distance>` then `edge <i> <j>` lines.
std::string write_subgraph(const Subgraph& s);

}  // namespace decor
