#include "decor/simulate.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

namespace {

constexpr std::size_t kChunkWords = 32;

// Bit b of kLowMasks[s] is (b >> s) & 1.
constexpr std::uint64_t kLowMasks[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                        0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

std::size_t words_for(std::size_t patterns) { return std::max<std::size_t>(1, (patterns + 63) / 64); }

kernels::GateOp make_op(GateKind kind) {
  using kernels::OpCode;
  switch (kind) {
    case GateKind::And: return {OpCode::And, false, 0, 0, 0};
    case GateKind::Nand: return {OpCode::And, true, 0, 0, 0};
    case GateKind::Or: return {OpCode::Or, false, 0, 0, 0};
    case GateKind::Nor: return {OpCode::Or, true, 0, 0, 0};
    case GateKind::Xor: return {OpCode::Xor, false, 0, 0, 0};
    case GateKind::Xnor: return {OpCode::Xor, true, 0, 0, 0};
    case GateKind::Buf: return {OpCode::Copy, false, 0, 0, 0};
    case GateKind::Not: return {OpCode::Copy, true, 0, 0, 0};
    case GateKind::Const0: return {OpCode::Zero, false, 0, 0, 0};
    case GateKind::Const1: return {OpCode::Zero, true, 0, 0, 0};
  }
  return {OpCode::Zero, false, 0, 0, 0};
}

}  // namespace

std::uint64_t PatternBlock::tail_mask() const {
  const std::size_t r = patterns % 64;
  return r == 0 ? ~std::uint64_t{0} : ((std::uint64_t{1} << r) - 1);
}

PatternBlock exhaustive_patterns(std::size_t n) {
  if (n >= 40) throw InvalidArgument("exhaustive enumeration of " + std::to_string(n) + " variables");
  PatternBlock block;
  block.sources = n;
  block.patterns = std::size_t{1} << n;
  block.words = words_for(block.patterns);
  block.data.assign(n * block.words, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t shift = n - 1 - j;
    std::uint64_t* row = block.row(j);
    if (shift < 6) {
      std::fill(row, row + block.words, kLowMasks[shift]);
    } else {
      for (std::size_t w = 0; w < block.words; ++w) row[w] = ((w >> (shift - 6)) & 1) ? ~std::uint64_t{0} : 0;
    }
  }
  return block;
}

PatternBlock random_patterns(std::size_t n, std::size_t patterns, Rng& rng) {
  PatternBlock block;
  block.sources = n;
  block.patterns = patterns;
  block.words = words_for(patterns);
  block.data.resize(n * block.words);
  for (auto& w : block.data) w = rng.next();
  return block;
}

Simulator::Simulator(const Circuit& c, kernels::Isa isa) : graph_(c), isa_(isa) {
  node_count_ = graph_.node_count();
  source_names_.reserve(c.source_count());
  for (const auto& n : c.inputs) source_names_.push_back(n);
  for (const auto& n : c.key_inputs) source_names_.push_back(n);
  op_of_node_.assign(node_count_, 0);
  ops_.reserve(c.gates.size());
  for (std::size_t g : graph_.topo_order()) {
    const std::size_t node = graph_.gate_node(g);
    kernels::GateOp op = make_op(c.gates[g].kind);
    op.fanin_begin = static_cast<std::uint32_t>(fanin_.size());
    op.fanin_count = static_cast<std::uint32_t>(graph_.fanin(node).size());
    op.out = static_cast<std::uint32_t>(node);
    for (std::size_t f : graph_.fanin(node)) fanin_.push_back(static_cast<std::uint32_t>(f));
    op_of_node_[node] = ops_.size();
    ops_.push_back(op);
  }
  for (const auto& o : c.outputs) {
    output_names_.push_back(o);
    output_nodes_.push_back(static_cast<std::uint32_t>(graph_.at(o)));
  }
}

std::vector<std::uint64_t> Simulator::run(const PatternBlock& in, std::optional<std::size_t> flip_node) const {
  if (in.sources != source_count())
    throw InvalidArgument("pattern block has " + std::to_string(in.sources) + " sources, circuit has " +
                          std::to_string(source_count()));
  const std::size_t words = in.words;
  std::vector<std::uint64_t> out(output_nodes_.size() * words);
  std::vector<std::uint64_t> scratch(node_count_ * kChunkWords);

  const std::span<const kernels::GateOp> all(ops_);
  std::size_t split = ops_.size();
  if (flip_node && graph_.is_gate(*flip_node)) split = op_of_node_[*flip_node] + 1;
  const kernels::Program head{all.subspan(0, split), fanin_};
  const kernels::Program tail{all.subspan(split), fanin_};

  for (std::size_t w0 = 0; w0 < words; w0 += kChunkWords) {
    const std::size_t len = std::min(kChunkWords, words - w0);
    const std::size_t stride = (len + 3) & ~std::size_t{3};
    for (std::size_t s = 0; s < in.sources; ++s) {
      std::uint64_t* dst = scratch.data() + s * stride;
      std::copy_n(in.row(s) + w0, len, dst);
      std::fill(dst + len, dst + stride, 0);
    }
    auto flip = [&] {
      std::uint64_t* row = scratch.data() + *flip_node * stride;
      for (std::size_t w = 0; w < stride; ++w) row[w] = ~row[w];
    };
    if (flip_node && !graph_.is_gate(*flip_node)) flip();
    kernels::eval_program(isa_, head, scratch.data(), stride);
    if (flip_node && graph_.is_gate(*flip_node)) {
      flip();
      kernels::eval_program(isa_, tail, scratch.data(), stride);
    }
    for (std::size_t o = 0; o < output_nodes_.size(); ++o)
      std::copy_n(scratch.data() + output_nodes_[o] * stride, len, out.data() + o * words + w0);
  }
  return out;
}

Assignment evaluate(const Circuit& c, const Assignment& a) {
  Simulator sim(c);
  PatternBlock block;
  block.sources = sim.source_count();
  block.patterns = 1;
  block.words = 1;
  block.data.assign(block.sources, 0);
  std::size_t used = 0;
  for (std::size_t s = 0; s < sim.source_count(); ++s) {
    auto it = a.find(sim.source_names()[s]);
    if (it == a.end()) throw InvalidArgument("missing input bit for " + sim.source_names()[s]);
    block.data[s] = it->second ? 1 : 0;
    ++used;
  }
  if (used != a.size()) {
    for (const auto& [name, value] : a) {
      if (std::find(sim.source_names().begin(), sim.source_names().end(), name) == sim.source_names().end())
        throw InvalidArgument("assignment names unknown port " + name);
    }
  }
  auto out = sim.run(block);
  Assignment result;
  for (std::size_t o = 0; o < sim.output_count(); ++o) result[sim.output_names()[o]] = (out[o] & 1) != 0;
  return result;
}

TruthTable::TruthTable(std::size_t variables, std::vector<std::string> outputs, std::vector<std::uint64_t> bits,
                       std::size_t words)
    : variables_(variables), outputs_(std::move(outputs)), bits_(std::move(bits)), words_(words) {
  // Clear the repeated padding above 2^n so comparisons see only real rows.
  if (rows() < 64)
    for (std::size_t o = 0; o < outputs_.size(); ++o) bits_[o * words_] &= (std::uint64_t{1} << rows()) - 1;
}

bool TruthTable::at(std::size_t output, std::size_t row) const {
  return ((bits_[output * words_ + row / 64] >> (row % 64)) & 1) != 0;
}

std::vector<bool> TruthTable::row(std::size_t r) const {
  std::vector<bool> out(outputs_.size());
  for (std::size_t o = 0; o < outputs_.size(); ++o) out[o] = at(o, r);
  return out;
}

std::vector<bool> TruthTable::column(std::size_t output) const {
  std::vector<bool> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(output, r);
  return out;
}

std::size_t TruthTable::differing_rows(const TruthTable& other) const {
  if (other.variables_ != variables_ || other.outputs_.size() != outputs_.size())
    throw InvalidArgument("truth tables have different shapes");
  std::size_t n = 0;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t any = 0;
    for (std::size_t o = 0; o < outputs_.size(); ++o) any |= bits_[o * words_ + w] ^ other.bits_[o * words_ + w];
    n += static_cast<std::size_t>(std::popcount(any));
  }
  return n;
}

std::size_t TruthTable::differing_rows(const TruthTable& other, std::size_t output) const {
  if (other.variables_ != variables_ || output >= outputs_.size() || output >= other.outputs_.size())
    throw InvalidArgument("truth tables have different shapes");
  return static_cast<std::size_t>(
      kernels::count_differences(bits_.data() + output * words_, other.bits_.data() + output * words_, words_));
}

TruthTable truth_table(const Circuit& c, std::size_t limit) {
  const std::size_t n = c.source_count();
  if (n > limit)
    throw InvalidArgument("input count " + std::to_string(n) + " exceeds truth-table limit " + std::to_string(limit));
  Simulator sim(c);
  PatternBlock block = exhaustive_patterns(n);
  const std::size_t words = block.words;
  return TruthTable(n, sim.output_names(), sim.run(block), words);
}

TruthTable truth_table_under_key(const Circuit& c, std::span<const std::uint8_t> key_bits, std::size_t limit) {
  const std::size_t n = c.inputs.size();
  if (key_bits.size() != c.key_inputs.size())
    throw InvalidArgument("key width " + std::to_string(key_bits.size()) + " does not match " +
                          std::to_string(c.key_inputs.size()) + " key ports");
  if (n > limit)
    throw InvalidArgument("input count " + std::to_string(n) + " exceeds truth-table limit " + std::to_string(limit));
  Simulator sim(c);
  PatternBlock inputs = exhaustive_patterns(n);
  PatternBlock block;
  block.sources = c.source_count();
  block.patterns = inputs.patterns;
  block.words = inputs.words;
  block.data = std::move(inputs.data);
  block.data.resize(block.sources * block.words);
  for (std::size_t k = 0; k < key_bits.size(); ++k)
    std::fill_n(block.row(n + k), block.words, key_bits[k] ? ~std::uint64_t{0} : 0);
  const std::size_t words = block.words;
  return TruthTable(n, sim.output_names(), sim.run(block), words);
}

std::string_view to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Equivalent: return "equivalent";
    case Verdict::Kind::Inequivalent: return "inequivalent";
    case Verdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

EquivalenceChecker::EquivalenceChecker(const Circuit& a, const Circuit& b) : sim_a_(a), sim_b_(b), inputs_(a.inputs) {
  if (a.inputs.size() != b.inputs.size() || a.outputs.size() != b.outputs.size())
    throw InvalidArgument("port mismatch: circuits have different input or output counts");
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < inputs_.size(); ++i) pos.emplace(inputs_[i], i);
  map_a_.resize(a.inputs.size());
  for (std::size_t i = 0; i < a.inputs.size(); ++i) map_a_[i] = i;
  map_b_.resize(b.inputs.size());
  for (std::size_t i = 0; i < b.inputs.size(); ++i) {
    auto it = pos.find(b.inputs[i]);
    if (it == pos.end()) throw InvalidArgument("port mismatch: input " + b.inputs[i] + " missing");
    map_b_[i] = it->second;
  }
  std::unordered_map<std::string, std::size_t> out_pos;
  for (std::size_t o = 0; o < b.outputs.size(); ++o) out_pos.emplace(b.outputs[o], o);
  for (const auto& o : a.outputs) {
    auto it = out_pos.find(o);
    if (it == out_pos.end()) throw InvalidArgument("port mismatch: output " + o + " missing");
    out_b_for_a_.push_back(it->second);
  }
}

PatternBlock EquivalenceChecker::bind(const PatternBlock& inputs, const Simulator& sim,
                                      const std::vector<std::size_t>& input_map,
                                      std::span<const std::uint8_t> key) const {
  const std::size_t n_inputs = input_map.size();
  if (key.size() != sim.source_count() - n_inputs)
    throw InvalidArgument("key width " + std::to_string(key.size()) + " does not match " +
                          std::to_string(sim.source_count() - n_inputs) + " key ports");
  PatternBlock block;
  block.sources = sim.source_count();
  block.patterns = inputs.patterns;
  block.words = inputs.words;
  block.data.resize(block.sources * block.words);
  for (std::size_t s = 0; s < n_inputs; ++s) std::copy_n(inputs.row(input_map[s]), inputs.words, block.row(s));
  for (std::size_t k = 0; k < key.size(); ++k)
    std::fill_n(block.row(n_inputs + k), block.words, key[k] ? ~std::uint64_t{0} : 0);
  return block;
}

Verdict EquivalenceChecker::check(std::span<const std::uint8_t> key_a, std::span<const std::uint8_t> key_b,
                                  const OracleConfig& cfg) const {
  const std::size_t n = inputs_.size();
  const bool exhaustive = n <= cfg.limit;
  PatternBlock inputs;
  if (exhaustive) {
    inputs = exhaustive_patterns(n);
  } else {
    Rng rng(cfg.seed);
    inputs = random_patterns(n, cfg.samples, rng);
  }
  const auto out_a = sim_a_.run(bind(inputs, sim_a_, map_a_, key_a));
  const auto out_b = sim_b_.run(bind(inputs, sim_b_, map_b_, key_b));
  const std::size_t words = inputs.words;

  std::size_t best = words * 64;
  for (std::size_t o = 0; o < out_b_for_a_.size(); ++o) {
    const std::uint64_t* ra = out_a.data() + o * words;
    const std::uint64_t* rb = out_b.data() + out_b_for_a_[o] * words;
    std::size_t w = kernels::first_difference(ra, rb, words);
    if (w == words) continue;
    std::uint64_t diff = ra[w] ^ rb[w];
    if (w == words - 1) diff &= inputs.tail_mask();
    if (diff == 0) continue;
    best = std::min(best, w * 64 + static_cast<std::size_t>(std::countr_zero(diff)));
  }
  Verdict v;
  if (best == words * 64) {
    v.kind = exhaustive ? Verdict::Kind::Equivalent : Verdict::Kind::Inconclusive;
    return v;
  }
  v.kind = Verdict::Kind::Inequivalent;
  for (std::size_t i = 0; i < n; ++i) v.witness[inputs_[i]] = ((inputs.row(i)[best / 64] >> (best % 64)) & 1) != 0;
  return v;
}

std::vector<bool> observability(const Simulator& sim, std::span<const std::size_t> nodes, const PatternBlock& patterns) {
  const auto good = sim.run(patterns);
  std::vector<bool> out;
  out.reserve(nodes.size());
  for (std::size_t node : nodes) {
    const auto bad = sim.run(patterns, node);
    out.push_back(kernels::first_difference(good.data(), bad.data(), good.size()) != good.size());
  }
  return out;
}

}  // namespace decor
