#pragma once

// Bit-parallel gate evaluation kernels. Every net owns `stride` 64-bit words;
// bit b of word w is the net's value under pattern 64*w + b. A scalar
// reference implementation and an AVX2 implementation are provided; the AVX2
// one is selected at runtime when the CPU supports it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace decor::kernels {

enum class OpCode : std::uint8_t { And, Or, Xor, Copy, Zero };

struct GateOp {
  OpCode code;
  bool invert;
  std::uint32_t fanin_begin;
  std::uint32_t fanin_count;
  std::uint32_t out;
};

struct Program {
  std::span<const GateOp> ops;
  std::span<const std::uint32_t> fanin;
};

enum class Isa : std::uint8_t { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// True when the binary carries the kernel and the CPU can run it.
bool isa_available(Isa isa);

/// Best available ISA; `DECOR_ISA=scalar` forces the reference kernels.
Isa active_isa();

/// `values` holds node_count * stride words; sources must be filled in.
/// stride must be a multiple of 4.
void eval_program(Isa isa, const Program& program, std::uint64_t* values, std::size_t stride);
inline void eval_program(const Program& program, std::uint64_t* values, std::size_t stride) {
  eval_program(active_isa(), program, values, stride);
}

/// Index of the first word where a and b differ, or `words` when equal.
std::size_t first_difference(Isa isa, const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
inline std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return first_difference(active_isa(), a, b, words);
}

/// Number of bit positions where a and b differ.
std::uint64_t count_differences(Isa isa, const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
inline std::uint64_t count_differences(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return count_differences(active_isa(), a, b, words);
}

namespace scalar {
void eval_program(const Program& program, std::uint64_t* values, std::size_t stride);
std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
std::uint64_t count_differences(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
}  // namespace scalar

#if defined(DECOR_HAVE_AVX2)
namespace avx2 {
void eval_program(const Program& program, std::uint64_t* values, std::size_t stride);
std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
std::uint64_t count_differences(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
}  // namespace avx2
#endif

}  // namespace decor::kernels
