#include "decor/features.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

std::uint8_t feature_code(GateKind kind) {
  switch (kind) {
    case GateKind::And: return kAnd;
    case GateKind::Nand: return kNand;
    case GateKind::Or: return kOr;
    case GateKind::Nor: return kNor;
    case GateKind::Xor: return kXor;
    case GateKind::Xnor: return kXnor;
    case GateKind::Not: return kNot;
    case GateKind::Buf:
    case GateKind::Const0:
    case GateKind::Const1: return kBuf;
  }
  return kPad;
}

std::string_view to_string(Encoding e) { return e == Encoding::Vector ? "vector" : "subgraph"; }

std::optional<Encoding> parse_encoding(std::string_view text) {
  if (text == "vector") return Encoding::Vector;
  if (text == "subgraph") return Encoding::Subgraph;
  return std::nullopt;
}

std::size_t vector_length(std::size_t depth, std::size_t fanin_bound) {
  std::size_t side = 0, level = 1;
  for (std::size_t l = 1; l <= depth; ++l) {
    level *= fanin_bound;
    side += level;
  }
  return 1 + 2 * side;
}

std::size_t feature_length(const ExtractorParams& p) {
  if (p.encoding == Encoding::Vector) return vector_length(p.depth, p.fanin_bound);
  return 1 + p.hops * p.layer_width;
}

FeatureExtractor::FeatureExtractor(const Circuit& c) : graph_(c), key_ports_(c.key_inputs) {}

std::uint8_t FeatureExtractor::code(std::size_t node) const {
  switch (graph_.type(node)) {
    case CircuitGraph::NodeType::Input: return kPrimaryInput;
    case CircuitGraph::NodeType::KeyInput: return kKeyInput;
    case CircuitGraph::NodeType::Gate: return feature_code(graph_.kind(node));
  }
  return kPad;
}

std::size_t FeatureExtractor::key_gate(std::string_view key_port) const {
  auto id = graph_.find(key_port);
  if (!id || graph_.type(*id) != CircuitGraph::NodeType::KeyInput)
    throw InvalidArgument("unknown key port " + std::string(key_port));
  const auto& sinks = graph_.sinks(*id);
  if (sinks.empty()) return *id;
  return *std::min_element(sinks.begin(), sinks.end(), [&](std::size_t a, std::size_t b) {
    if (code(a) != code(b)) return code(a) < code(b);
    return graph_.topo_rank(a) < graph_.topo_rank(b);
  });
}

namespace {

using Levels = std::vector<std::vector<std::uint8_t>>;

std::vector<std::uint8_t> flatten(const Levels& l) {
  std::vector<std::uint8_t> out;
  for (const auto& level : l) out.insert(out.end(), level.begin(), level.end());
  return out;
}

// Places up to f child subtrees (already encoded, depth levels each) under
// `root`, smallest encoding first; missing children are zero-filled.
Levels assemble(std::uint8_t root, std::vector<Levels> children, std::size_t depth, std::size_t f) {
  std::sort(children.begin(), children.end(), [](const Levels& a, const Levels& b) { return flatten(a) < flatten(b); });
  if (children.size() > f) children.resize(f);
  Levels out(depth + 1);
  out[0] = {root};
  std::size_t width = 1;
  for (std::size_t l = 1; l <= depth; ++l) {
    const std::size_t per_child = width;  // f^(l-1)
    width *= f;
    out[l].assign(width, kPad);
    for (std::size_t c = 0; c < children.size(); ++c)
      std::copy(children[c][l - 1].begin(), children[c][l - 1].end(), out[l].begin() + c * per_child);
  }
  return out;
}

Levels leaf(std::uint8_t code, std::size_t depth, std::size_t f) { return assemble(code, {}, depth, f); }

}  // namespace

Levels FeatureExtractor::fanin_levels(std::size_t node, std::size_t depth, std::size_t f) const {
  std::vector<Levels> children;
  if (depth > 0)
    for (std::size_t in : graph_.fanin(node)) children.push_back(fanin_levels(in, depth - 1, f));
  return assemble(code(node), std::move(children), depth, f);
}

Levels FeatureExtractor::fanout_levels(std::size_t node, std::size_t depth, std::size_t f) const {
  std::vector<Levels> children;
  if (depth > 0) {
    for (std::size_t s : graph_.sinks(node)) children.push_back(fanout_levels(s, depth - 1, f));
    if (graph_.is_output(node)) children.push_back(leaf(kPrimaryOutput, depth - 1, f));
  }
  return assemble(code(node), std::move(children), depth, f);
}

std::vector<std::uint8_t> FeatureExtractor::vector_feature(std::string_view key_port, std::size_t depth,
                                                           std::size_t fanin_bound) const {
  if (depth < 1) throw InvalidArgument("feature depth must be at least 1");
  if (fanin_bound < 1) throw InvalidArgument("fan-in bound must be at least 1");
  const std::size_t center = key_gate(key_port);
  const Levels in = fanin_levels(center, depth, fanin_bound);
  const Levels out = fanout_levels(center, depth, fanin_bound);
  std::vector<std::uint8_t> v{code(center)};
  for (std::size_t l = 1; l <= depth; ++l) v.insert(v.end(), in[l].begin(), in[l].end());
  for (std::size_t l = 1; l <= depth; ++l) v.insert(v.end(), out[l].begin(), out[l].end());
  return v;
}

Subgraph FeatureExtractor::subgraph_feature(std::string_view key_port, std::size_t hops) const {
  if (hops < 1) throw InvalidArgument("hop count must be at least 1");
  const std::size_t center = key_gate(key_port);
  Subgraph s;
  std::unordered_map<std::size_t, std::size_t> local;
  std::deque<std::size_t> queue{center};
  local.emplace(center, 0);
  s.names.push_back(graph_.name(center));
  s.codes.push_back(code(center));
  s.distance.push_back(0);

  auto neighbours = [&](std::size_t n) {
    std::vector<std::size_t> out(graph_.fanin(n).begin(), graph_.fanin(n).end());
    out.insert(out.end(), graph_.sinks(n).begin(), graph_.sinks(n).end());
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return graph_.name(a) < graph_.name(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    const std::size_t d = s.distance[local.at(n)];
    if (d == hops) continue;
    for (std::size_t m : neighbours(n)) {
      if (local.contains(m)) continue;
      local.emplace(m, s.names.size());
      s.names.push_back(graph_.name(m));
      s.codes.push_back(code(m));
      s.distance.push_back(d + 1);
      queue.push_back(m);
    }
  }
  for (const auto& [node, i] : local)
    for (std::size_t m : neighbours(node))
      if (auto it = local.find(m); it != local.end() && i < it->second) s.edges.emplace_back(i, it->second);
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

std::vector<std::uint8_t> FeatureExtractor::feature(std::string_view key_port, const ExtractorParams& p) const {
  if (p.encoding == Encoding::Vector) return vector_feature(key_port, p.depth, p.fanin_bound);
  return serialize_subgraph(subgraph_feature(key_port, p.hops), p.hops, p.layer_width);
}

std::vector<std::uint8_t> extract_vector_feature(const Circuit& c, std::string_view key_port, std::size_t depth,
                                                 std::size_t fanin_bound) {
  return FeatureExtractor(c).vector_feature(key_port, depth, fanin_bound);
}

Subgraph extract_subgraph_feature(const Circuit& c, std::string_view key_port, std::size_t hops) {
  return FeatureExtractor(c).subgraph_feature(key_port, hops);
}

std::vector<std::uint8_t> serialize_subgraph(const Subgraph& s, std::size_t hops, std::size_t layer_width) {
  std::vector<std::uint8_t> out{s.codes.empty() ? std::uint8_t{kPad} : s.codes[0]};
  for (std::size_t d = 1; d <= hops; ++d) {
    std::vector<std::uint8_t> layer;
    for (std::size_t i = 0; i < s.codes.size(); ++i)
      if (s.distance[i] == d) layer.push_back(s.codes[i]);
    std::sort(layer.begin(), layer.end(), std::greater<>());
    layer.resize(layer_width, kPad);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::uint64_t canonical_hash(const Subgraph& s) {
  const std::size_t n = s.codes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : s.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::uint64_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = splitmix64(s.codes[i] * 2 + (i == 0 ? 1 : 0));
  std::vector<std::uint64_t> next(n), around;
  const std::size_t rounds = 2 * (s.distance.empty() ? 0 : *std::max_element(s.distance.begin(), s.distance.end())) + 1;
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      around.clear();
      for (std::size_t j : adj[i]) around.push_back(label[j]);
      std::sort(around.begin(), around.end());
      std::uint64_t h = splitmix64(label[i]);
      for (std::uint64_t x : around) h = splitmix64(h ^ x);
      next[i] = h;
    }
    label.swap(next);
  }
  std::vector<std::uint64_t> all = label;
  std::sort(all.begin(), all.end());
  std::uint64_t h = n ? label[0] : 0;
  for (std::uint64_t x : all) h = splitmix64(h ^ x);
  return h;
}

std::string write_subgraph(const Subgraph& s) {
  std::string out;
  for (std::size_t i = 0; i < s.codes.size(); ++i)
    out += "node " + std::to_string(i) + " " + std::to_string(s.codes[i]) + " " + std::to_string(s.distance[i]) + "\n";
  for (auto [a, b] : s.edges) out += "edge " + std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

}  // namespace decor
