#include <bit>

#include "decor/kernels.hpp"

namespace decor::kernels::scalar {

void eval_program(const Program& program, std::uint64_t* values, std::size_t stride) {
  for (const GateOp& op : program.ops) {
    std::uint64_t* dst = values + static_cast<std::size_t>(op.out) * stride;
    const std::uint32_t* fi = program.fanin.data() + op.fanin_begin;
    const std::uint64_t flip = op.invert ? ~std::uint64_t{0} : 0;
    if (op.code == OpCode::Zero) {
      for (std::size_t w = 0; w < stride; ++w) dst[w] = flip;
      continue;
    }
    const std::uint64_t* first = values + static_cast<std::size_t>(fi[0]) * stride;
    for (std::size_t w = 0; w < stride; ++w) dst[w] = first[w];
    for (std::uint32_t j = 1; j < op.fanin_count; ++j) {
      const std::uint64_t* src = values + static_cast<std::size_t>(fi[j]) * stride;
      switch (op.code) {
        case OpCode::And:
          for (std::size_t w = 0; w < stride; ++w) dst[w] &= src[w];
          break;
        case OpCode::Or:
          for (std::size_t w = 0; w < stride; ++w) dst[w] |= src[w];
          break;
        case OpCode::Xor:
          for (std::size_t w = 0; w < stride; ++w) dst[w] ^= src[w];
          break;
        default:
          break;
      }
    }
    if (flip)
      for (std::size_t w = 0; w < stride; ++w) dst[w] = ~dst[w];
  }
}

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w)
    if (a[w] != b[w]) return w;
  return words;
}

std::uint64_t count_differences(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t n = 0;
  for (std::size_t w = 0; w < words; ++w) n += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
  return n;
}

}  // namespace decor::kernels::scalar
