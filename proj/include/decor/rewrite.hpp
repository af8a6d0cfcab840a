#pragma once

#include <cstddef>

#include "decor/netlist.hpp"

namespace decor {

class Rng;

/// Function-preserving structural perturbation used as a stand-in for logic
/// synthesis. Each pass visits the gates in topological order and, with
/// probability 0.5, applies one applicable local rewrite drawn with fixed weights
/// that favour size-reducing rewrites:
///   - De Morgan swap (AND <-> NOR and OR <-> NAND with inverted fan-ins)
///   - XNOR -> NOT(XOR), XOR -> NOT(XNOR)
///   - NOT absorption into a single-fanout driver (NOT(AND) -> NAND, ...)
///   - double-negation insertion on a fan-in edge
///   - double-negation elimination
///   - associativity regrouping of 2-input AND/OR/XOR chains
/// Port names and the names of surviving nets are preserved. The result is
/// topologically ordered. passes == 0 returns the circuit unchanged.
Circuit rewrite_randomized(const Circuit& c, Rng& rng, std::size_t passes);

/// Technology-mapping style inverter cleanup: a NOT reading a single-fanout
/// AND/OR/XOR-family gate is merged into it, double negations are removed,
/// and with through_xor_inputs an inverted XOR/XNOR fan-in is folded into the
/// gate polarity. Repeats to a fixed point.
Circuit absorb_inverters(const Circuit& c, bool through_xor_inputs = false);

/// Synthesis proxy: rewrite_randomized followed by absorb_inverters.
Circuit synthesize(const Circuit& c, Rng& rng, std::size_t passes);

/// Folds constant pseudo-gates and buffers, then removes dead logic. Output
/// port names are preserved (driven by BUF/NOT/constant gates if needed).
Circuit propagate_constants(const Circuit& c);

}  // namespace decor
